#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cspm {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Errors caused by the input data rather than by how the tool was invoked.
/// The CLI maps these to exit code 2.
class DataError : public Error {
public:
    using Error::Error;
};

class EmptyDataset : public DataError {
public:
    EmptyDataset() : DataError("no events left after filtering") {}
};

class InvalidTimestamp : public DataError {
public:
    explicit InvalidTimestamp(const std::string& text)
        : DataError("invalid timestamp '" + text + "'"), text_(text) {}
    const std::string& text() const noexcept { return text_; }

private:
    std::string text_;
};

class EventAfterObservationEnd : public DataError {
public:
    using DataError::DataError;
};

class FileNotFound : public DataError {
public:
    explicit FileNotFound(const std::string& path)
        : DataError("cannot open '" + path + "'"), path_(path) {}
    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

class MalformedRow : public DataError {
public:
    MalformedRow(std::string source, std::size_t line, const std::string& why)
        : DataError(source + ":" + std::to_string(line) + ": " + why),
          source_(std::move(source)),
          line_(line) {}
    const std::string& source() const noexcept { return source_; }
    std::size_t line() const noexcept { return line_; }

private:
    std::string source_;
    std::size_t line_;
};

class NetworkError : public DataError {
public:
    using DataError::DataError;
};

class SchemaError : public DataError {
public:
    using DataError::DataError;
};

class UndefinedGini : public DataError {
public:
    UndefinedGini() : DataError("Gini coefficient undefined: all values are zero") {}
};

/// Raised for synthetic-generator configurations that cannot satisfy
/// the planted class definitions.
class InfeasibleConfig : public Error {
public:
    using Error::Error;
};

}  // namespace cspm
