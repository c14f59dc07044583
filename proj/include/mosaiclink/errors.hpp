#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mosaiclink {

/// Base class for every error raised by the pipeline.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// An image file could not be opened or decoded.
class ImageDecodeError : public Error {
public:
    using Error::Error;
};

/// Two vectors that must share a dimension do not.
class DimensionError : public Error {
public:
    using Error::Error;
};

/// A zero vector was passed where cosine distance is required.
class DegenerateVectorError : public Error {
public:
    using Error::Error;
};

/// A negative age estimate was supplied.
class InvalidAgeError : public Error {
public:
    using Error::Error;
};

/// Invalid configuration (bad threshold, unknown backend, disabled evidence channels, ...).
class ConfigError : public Error {
public:
    using Error::Error;
};

/// A detection backend could not serve a request.
class BackendUnavailableError : public Error {
public:
    using Error::Error;
};

/// Statistics were requested for an empty graph.
class EmptyGraphError : public Error {
public:
    using Error::Error;
};

/// An output file could not be written.
class WriteError : public Error {
public:
    using Error::Error;
};

/// A manifest line failed to parse or validate. Carries the 1-based line number.
class ManifestError : public Error {
public:
    ManifestError(std::size_t line, const std::string& what)
        : Error("manifest line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

/// Two manifest lines declare the same post_id.
class DuplicatePostError : public ManifestError {
public:
    DuplicatePostError(std::size_t line, const std::string& post_id)
        : ManifestError(line, "duplicate post_id \"" + post_id + "\""), post_id_(post_id) {}

    const std::string& post_id() const { return post_id_; }

private:
    std::string post_id_;
};

/// A detection bundle sidecar is malformed. Carries the offending field path.
class BundleParseError : public Error {
public:
    BundleParseError(const std::string& field, const std::string& what)
        : Error("bundle field \"" + field + "\": " + what), field_(field) {}

    const std::string& field() const { return field_; }

private:
    std::string field_;
};

}  // namespace mosaiclink
