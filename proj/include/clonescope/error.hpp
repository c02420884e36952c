#pragma once

#include <stdexcept>
#include <string>

namespace clonescope {

/// Base for every error raised by the toolkit.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Corpus root missing or unreadable.
class CorpusError : public Error {
public:
    using Error::Error;
};

/// Argument outside an operation's domain (empty bag, theta out of range, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Syntax the method parser cannot make sense of.
class ParseError : public Error {
public:
    using Error::Error;
};

/// Training diverged or the vocabulary is degenerate.
class TrainingError : public Error {
public:
    using Error::Error;
};

/// Malformed or missing artifact file.
class ArtifactError : public Error {
public:
    using Error::Error;
};

}  // namespace clonescope
