#pragma once

#include <stdexcept>

namespace drawlab {

/// Base class for every error thrown by this library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid run configuration (CLI exit code 2).
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Manifest parsing or record validation failure (CLI exit code 3).
class CorpusError : public Error {
public:
    using Error::Error;
};

/// Processing failure inside a pipeline (CLI exit code 4).
class PipelineError : public Error {
public:
    using Error::Error;
};

} // namespace drawlab
