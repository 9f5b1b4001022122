#ifndef CLARITAS_ERROR_HPP
#define CLARITAS_ERROR_HPP

#include <stdexcept>
#include <string>

namespace claritas {

/// Base class for every error this library throws.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class FileNotFound : public Error {
public:
    using Error::Error;
};

class UnsupportedFormat : public Error {
public:
    using Error::Error;
};

/// Header/payload mismatch or otherwise undecodable file contents.
class CorruptData : public Error {
public:
    using Error::Error;
};

class IoFailure : public Error {
public:
    using Error::Error;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

class SpaceTagMismatch : public Error {
public:
    using Error::Error;
};

/// A color-only operation received a single-channel image.
class NotColor : public Error {
public:
    using Error::Error;
};

class ImageTooSmall : public Error {
public:
    using Error::Error;
};

class ZeroWeightSum : public Error {
public:
    using Error::Error;
};

class ZeroLuminance : public Error {
public:
    using Error::Error;
};

/// Malformed batch configuration.
class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace claritas

#endif  // CLARITAS_ERROR_HPP
