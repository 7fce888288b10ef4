#pragma once

#include <stdexcept>
#include <string>

namespace dims {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Payload type incompatible with the metric (string under a norm, vector under edit distance).
class KindMismatchError : public Error {
public:
    using Error::Error;
};

/// Vector payloads with unequal dimensionality, or not matching the metric's dimensionality.
class DimensionMismatchError : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    using Error::Error;
};

class EmptyDatasetError : public Error {
public:
    using Error::Error;
};

class DuplicateIdError : public Error {
public:
    using Error::Error;
};

class UnknownIdError : public Error {
public:
    using Error::Error;
};

class UnknownLeafError : public Error {
public:
    using Error::Error;
};

class IndexNotBuiltError : public Error {
public:
    using Error::Error;
};

/// Cost-model parameters outside the model's domain of validity.
class DomainError : public Error {
public:
    using Error::Error;
};

class CorruptIndexError : public Error {
public:
    using Error::Error;
};

class VersionMismatchError : public Error {
public:
    using Error::Error;
};

}  // namespace dims
