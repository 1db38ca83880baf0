#pragma once

#include <stdexcept>
#include <string>

namespace feast {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& message) : std::runtime_error(message) {}
};

/// Unreadable/unwritable paths and malformed artifact files.
class IoError : public Error {
public:
    using Error::Error;
};

class EmptyCorpusError : public Error {
public:
    using Error::Error;
};

/// Thresholds or options that leave nothing to work with.
class ConfigError : public Error {
public:
    using Error::Error;
};

class ParameterError : public Error {
public:
    using Error::Error;
};

class DegenerateInputError : public Error {
public:
    using Error::Error;
};

/// Feature terms that the corpus vocabulary does not contain.
class ProjectionError : public Error {
public:
    using Error::Error;
};

class NotFoundError : public Error {
public:
    using Error::Error;
};

class ValidationError : public Error {
public:
    using Error::Error;
};

class InsufficientCandidatesError : public Error {
public:
    using Error::Error;
};

/// Artifact files that were not produced from each other.
class ArtifactMismatchError : public Error {
public:
    using Error::Error;
};

}  // namespace feast
