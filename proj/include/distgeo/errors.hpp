#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace distgeo {

// Base for all engine errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed expression or scenario text. Position is a 0-based byte offset
// into the offending string (or a line number for scenario files).
struct ParseError : Error {
    ParseError(const std::string& msg, int position)
        : Error(msg + " (at position " + std::to_string(position) + ")"),
          pos(position) {}
    int pos;
};

// Domain failure while evaluating an expression (log of non-positive,
// division by zero, ...). Position points at the offending node.
struct EvalError : Error {
    EvalError(const std::string& msg, int position)
        : Error(msg + " (expression position " + std::to_string(position) + ")"),
          pos(position) {}
    int pos;
};

// A model violated a structural requirement at a concrete point
// (non-SPD metric, rank-deficient generators, ...).
struct ModelError : Error {
    ModelError(const std::string& msg, std::vector<double> at = {})
        : Error(format(msg, at)), point(std::move(at)) {}
    std::vector<double> point;

    static std::string format(const std::string& msg, const std::vector<double>& at) {
        if (at.empty()) return msg;
        std::string s = msg + " at (";
        for (std::size_t i = 0; i < at.size(); ++i) {
            if (i) s += ", ";
            s += std::to_string(at[i]);
        }
        return s + ")";
    }
};

// An argument that must be a section of D (or of D-perp / its annihilator)
// failed the membership check.
struct SectionError : ModelError {
    using ModelError::ModelError;
};

// Bad user input outside the numerical pipeline: unknown fixture, dimension
// mismatch, bad flags, unreadable file.
struct InputError : Error {
    using Error::Error;
};

}  // namespace distgeo
