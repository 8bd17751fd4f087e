#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qfa {

/// Base class for every error raised by the library.
class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Shape mismatch between matrices, vectors or bases.
class dimension_error : public error {
public:
    using error::error;
};

/// Argument outside the mathematical domain of an operation (e.g. n = 0).
class domain_error : public error {
public:
    using error::error;
};

/// Word contains a symbol outside the model's input alphabet, or two models
/// disagree on their alphabets.
class input_error : public error {
public:
    using error::error;
};

/// Exact equivalence requested on entries that are not recognisably rational.
class mode_error : public error {
public:
    using error::error;
};

/// A single broken invariant, located by a document-style path such as
/// "unitaries.a" or "control.transitions.d0.g".
struct Violation {
    std::string path;
    std::string message;

    friend bool operator==(const Violation&, const Violation&) = default;
};

inline std::string describe(const std::vector<Violation>& violations)
{
    std::string out;
    for (const auto& v : violations) {
        if (!out.empty())
            out += "; ";
        out += v.path.empty() ? v.message : v.path + ": " + v.message;
    }
    return out;
}

/// Raised by the model constructors; carries every violation found, not just
/// the first.
class validation_error : public error {
public:
    explicit validation_error(std::vector<Violation> violations)
        : error(describe(violations)), violations_(std::move(violations))
    {
    }

    const std::vector<Violation>& violations() const noexcept { return violations_; }

private:
    std::vector<Violation> violations_;
};

/// Malformed automaton document. `path` locates the offending JSON node;
/// `byte_offset` is set for syntax errors.
class parse_error : public error {
public:
    parse_error(std::string path, const std::string& message, std::size_t byte_offset = 0)
        : error(path.empty() ? message : path + ": " + message),
          path_(std::move(path)),
          byte_offset_(byte_offset)
    {
    }

    const std::string& path() const noexcept { return path_; }
    std::size_t byte_offset() const noexcept { return byte_offset_; }

private:
    std::string path_;
    std::size_t byte_offset_;
};

} // namespace qfa
