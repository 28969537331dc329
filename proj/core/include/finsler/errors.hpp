#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace finsler {

// Base for every error raised by the library. Callers that only care about
// "something went wrong in the math" can catch this one type.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Division by a jet whose constant coefficient is zero.
class SingularJetError : public Error {
public:
    using Error::Error;
};

// Elementary function evaluated outside its domain (sqrt/log of a
// non-positive number, non-integer power of a non-positive base, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

// Non-finite intermediate while extracting derivatives; `index` names the
// offending tensor entry, e.g. "dy[3](0,1,1)".
class EvaluationError : public Error {
public:
    EvaluationError(const std::string& what, std::string index)
        : Error(what + " at " + index), index_(std::move(index)) {}
    const std::string& index() const noexcept { return index_; }

private:
    std::string index_;
};

// Riemannian metric a(x) or fundamental tensor g_ij(x, y) not invertible.
class MetricDegenerateError : public Error {
public:
    using Error::Error;
};

// One of the Finsler regularity denominators is non-positive.
class RegularityError : public Error {
public:
    RegularityError(const std::string& what, double b2, double s)
        : Error(what + " at (b2=" + std::to_string(b2) + ", s=" + std::to_string(s) + ")"),
          b2_(b2), s_(s) {}
    double b2() const noexcept { return b2_; }
    double s() const noexcept { return s_; }

private:
    double b2_;
    double s_;
};

class SyntaxError : public Error {
public:
    SyntaxError(const std::string& what, std::size_t offset)
        : Error(what + " at offset " + std::to_string(offset)), offset_(offset) {}
    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

class UnknownIdentifierError : public SyntaxError {
public:
    UnknownIdentifierError(const std::string& name, std::size_t offset)
        : SyntaxError("unknown identifier '" + name + "'", offset), name_(name) {}
    const std::string& name() const noexcept { return name_; }

private:
    std::string name_;
};

class QuadratureError : public Error {
public:
    using Error::Error;
};

// beta is not closed-conformal at the queried point.
class NotConformalError : public Error {
public:
    NotConformalError(const std::string& what, double residual)
        : Error(what + " (residual " + std::to_string(residual) + ")"), residual_(residual) {}
    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

class SamplerExhaustedError : public Error {
public:
    using Error::Error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

}  // namespace finsler
