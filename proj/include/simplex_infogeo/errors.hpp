#pragma once

#include <stdexcept>
#include <string>

namespace sig {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class NonPositivePart : public Error {
public:
    using Error::Error;
};

class DimensionTooSmall : public Error {
public:
    using Error::Error;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

class EmptySelection : public Error {
public:
    using Error::Error;
};

class NotInTangentSpace : public Error {
public:
    using Error::Error;
};

class InvalidPartition : public Error {
public:
    using Error::Error;
};

class OutOfDomain : public Error {
public:
    using Error::Error;
};

class CoordinateDomainError : public Error {
public:
    using Error::Error;
};

class NegativeWeight : public Error {
public:
    using Error::Error;
};

class InvalidSubset : public Error {
public:
    using Error::Error;
};

class BasePointMismatch : public Error {
public:
    using Error::Error;
};

class ParameterOutOfRange : public Error {
public:
    using Error::Error;
};

/// CSV ingestion error with 1-based file location.
class ParseError : public Error {
public:
    ParseError(const std::string& what, int row, int col)
        : Error(what + " (row " + std::to_string(row) + ", column " + std::to_string(col) + ")"),
          row_(row), col_(col) {}
    int row() const { return row_; }
    int col() const { return col_; }

private:
    int row_;
    int col_;
};

/// Zero cell encountered under the `error` zero policy.
class ZeroPartError : public Error {
public:
    ZeroPartError(const std::string& sample_id, const std::string& part_name)
        : Error("zero part in sample '" + sample_id + "', part '" + part_name + "'"),
          sample_id_(sample_id), part_name_(part_name) {}
    const std::string& sample_id() const { return sample_id_; }
    const std::string& part_name() const { return part_name_; }

private:
    std::string sample_id_;
    std::string part_name_;
};

class RaggedRows : public Error {
public:
    using Error::Error;
};

class UnknownPartName : public Error {
public:
    using Error::Error;
};

}  // namespace sig
