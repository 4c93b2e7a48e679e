#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace doccluster {

enum class ErrorKind {
    CorpusEmpty,
    IngestError,
    UnlabeledDocument,
    UnknownDocument,
    EmptyVocabulary,
    EmptyDocument,
    DomainError,
    DimensionError,
    TooManyClusters,
    IncomparableReports,
    EmptyCluster,
    ParseError,
    IoError,
};

constexpr std::string_view kind_name(ErrorKind kind) noexcept
{
    switch (kind) {
    case ErrorKind::CorpusEmpty: return "CorpusEmpty";
    case ErrorKind::IngestError: return "IngestError";
    case ErrorKind::UnlabeledDocument: return "UnlabeledDocument";
    case ErrorKind::UnknownDocument: return "UnknownDocument";
    case ErrorKind::EmptyVocabulary: return "EmptyVocabulary";
    case ErrorKind::EmptyDocument: return "EmptyDocument";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::DimensionError: return "DimensionError";
    case ErrorKind::TooManyClusters: return "TooManyClusters";
    case ErrorKind::IncomparableReports: return "IncomparableReports";
    case ErrorKind::EmptyCluster: return "EmptyCluster";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::IoError: return "IoError";
    }
    return "Unknown";
}

/// Every failure raised by the library. what() is "<Kind>: <detail>".
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& detail)
        : std::runtime_error(std::string(kind_name(kind)) + ": " + detail), kind_(kind)
    {
    }

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

// Non-fatal conditions collected while building artifacts (e.g. an empty document).
using Warnings = std::vector<std::string>;

} // namespace doccluster
