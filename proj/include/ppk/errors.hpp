#pragma once

#include <stdexcept>
#include <string>

namespace ppk {

/// Base for every error raised on bad input. The CLI maps these to exit code 2.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed document. `locus` is a field path such as `videos[0].frames[1].persons[0].box`,
/// or `line N` for syntax errors.
class SchemaError : public Error {
public:
    SchemaError(std::string locus, const std::string& what)
        : Error(locus.empty() ? what : locus + ": " + what), locus_(std::move(locus)) {}
    const std::string& locus() const noexcept { return locus_; }

private:
    std::string locus_;
};

class TaxonomyError : public SchemaError {
public:
    using SchemaError::SchemaError;
};

class IntegrityError : public SchemaError {
public:
    using SchemaError::SchemaError;
};

class ConfigError : public SchemaError {
public:
    using SchemaError::SchemaError;
};

class EmptyCropError : public Error {
public:
    using Error::Error;
};

class MissingGroupError : public Error {
public:
    using Error::Error;
};

class ClassMismatchError : public Error {
public:
    using Error::Error;
};

class MissingModelError : public Error {
public:
    using Error::Error;
};

class IdMismatchError : public Error {
public:
    using Error::Error;
};

class MissingVideoError : public Error {
public:
    using Error::Error;
};

}  // namespace ppk
