#ifndef TEMPODISC_ERRORS_HPP
#define TEMPODISC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace tempodisc {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// A closed-form exponent overflowed or produced NaN.
class NonFiniteError : public Error {
public:
    explicit NonFiniteError(const std::string& what) : Error(what) {}
};

/// Parameters at an excluded value (e.g. beta = -1 divides by zero).
class InvalidParamsError : public Error {
public:
    explicit InvalidParamsError(const std::string& what) : Error(what) {}
};

/// Calendar times out of order (t2 < t1).
class OrderViolationError : public Error {
public:
    explicit OrderViolationError(const std::string& what) : Error(what) {}
};

/// Argument outside its documented domain (negative delay, bad Likert value, ...).
class DomainError : public Error {
public:
    explicit DomainError(const std::string& what) : Error(what) {}
};

/// First log-derivative too small to divide by at a finite-difference stencil.
class DegenerateDerivativeError : public Error {
public:
    explicit DegenerateDerivativeError(const std::string& what) : Error(what) {}
};

class EmptyGridError : public Error {
public:
    explicit EmptyGridError(const std::string& what) : Error(what) {}
};

/// Root bracketing failed on the search interval.
class BracketFailureError : public Error {
public:
    explicit BracketFailureError(const std::string& what) : Error(what) {}
};

class EmptyDataError : public Error {
public:
    explicit EmptyDataError(const std::string& what) : Error(what) {}
};

/// Consistency screening needs at least one equal-amount item in the design.
class NoDominanceItemError : public Error {
public:
    explicit NoDominanceItemError(const std::string& what) : Error(what) {}
};

/// A choice record's subject has no covariate profile.
class MissingProfileError : public Error {
public:
    explicit MissingProfileError(const std::string& what) : Error(what) {}
};

class RankDeficientCovariatesError : public Error {
public:
    explicit RankDeficientCovariatesError(const std::string& what) : Error(what) {}
};

class LengthMismatchError : public Error {
public:
    explicit LengthMismatchError(const std::string& what) : Error(what) {}
};

/// Rank correlation of an all-constant vector is undefined.
class DegenerateConstantVectorError : public Error {
public:
    explicit DegenerateConstantVectorError(const std::string& what) : Error(what) {}
};

class InsufficientDataError : public Error {
public:
    explicit InsufficientDataError(const std::string& what) : Error(what) {}
};

/// Malformed input file (CSV/JSON parse or schema failure).
class ParseError : public Error {
public:
    explicit ParseError(const std::string& what) : Error(what) {}
};

} // namespace tempodisc

#endif // TEMPODISC_ERRORS_HPP
