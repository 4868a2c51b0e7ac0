#pragma once

#include <stdexcept>
#include <string>

namespace obscura {

/// Error raised by the constraint / question parsers, with 1-based source position.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& message, int line, int column)
        : std::runtime_error("parse error at " + std::to_string(line) + ":" +
                             std::to_string(column) + ": " + message),
          line_(line),
          column_(column) {}

    int line() const { return line_; }
    int column() const { return column_; }

private:
    int line_;
    int column_;
};

/// Malformed or incompatible on-disk data (scenes, records, manifests).
class SchemaError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Scene or environment generation could not produce a result within budget.
class GenerationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A question admits no hidden-object completion at all. Distinct from a
/// valid (nonempty) answer set.
class EmptyAnswerError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Two objects share an exact x or y coordinate; spatial relations would be
/// ill-defined.
class DegeneratePositionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Prediction/gold mismatch or unknown label during evaluation.
class EvalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace obscura
