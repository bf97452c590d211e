#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace ela {

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Base class of every error raised by the toolkit. The CLI maps
/// `DataError` subclasses to exit code 2 and everything else to 3.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// Errors caused by user supplied data rather than by a bug.
class DataError : public Error {
public:
    using Error::Error;
};

class EvaluationError : public DataError {
public:
    EvaluationError(std::size_t point_index, const std::string& what)
        : DataError(what), point_index_(point_index) {}
    std::size_t point_index() const noexcept { return point_index_; }

private:
    std::size_t point_index_;
};

class UnsupportedFunction : public DataError {
public:
    using DataError::DataError;
};

class ParseError : public DataError {
public:
    ParseError(std::size_t line, const std::string& what)
        : DataError("line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class DuplicateRecord : public ParseError {
public:
    using ParseError::ParseError;
};

class SchemaMismatch : public DataError {
public:
    using DataError::DataError;
};

class AlignmentError : public DataError {
public:
    using DataError::DataError;
};

class FileNotFound : public DataError {
public:
    using DataError::DataError;
};

/// One BBOB-style problem instance: function id, dimension, instance id.
struct ProblemId {
    int fid = 0;
    int dim = 0;
    int iid = 0;

    friend bool operator==(const ProblemId&, const ProblemId&) = default;
    friend auto operator<=>(const ProblemId& a, const ProblemId& b) {
        if (auto c = a.dim <=> b.dim; c != 0) return c;
        if (auto c = a.fid <=> b.fid; c != 0) return c;
        return a.iid <=> b.iid;
    }
};

/// A (function, dimension) pair: the unit of performance measurement and of
/// cross-validation folds. Ordered by dimension first, then function id.
struct FunctionKey {
    int fid = 0;
    int dim = 0;

    friend bool operator==(const FunctionKey&, const FunctionKey&) = default;
    friend auto operator<=>(const FunctionKey& a, const FunctionKey& b) {
        if (auto c = a.dim <=> b.dim; c != 0) return c;
        return a.fid <=> b.fid;
    }

    /// `fid:dim`, the composite column key used in performance CSVs.
    std::string label() const { return std::to_string(fid) + ":" + std::to_string(dim); }
};

}  // namespace ela
