#pragma once

#include <stdexcept>
#include <string>

namespace qwilson {

// Base class for every error thrown by the library.  All conditions that
// depend on runtime values (parameters, indices) are reported through these
// exceptions; asserts are reserved for internal logic errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

class DivisionByZero : public Error {
public:
    explicit DivisionByZero(const std::string& msg = "division by zero") : Error(msg) {}
};

class InvalidInput : public Error {
public:
    explicit InvalidInput(const std::string& msg) : Error(msg) {}
};

// Evaluating a rational function at a root of its (reduced) denominator.
class PoleAtPoint : public Error {
public:
    explicit PoleAtPoint(const std::string& msg = "evaluation at a pole") : Error(msg) {}
};

// Asking for the leading behaviour of the zero function.
class ZeroFunction : public Error {
public:
    explicit ZeroFunction(const std::string& msg = "zero function has no leading term") : Error(msg) {}
};

// A lower-parameter q-Pochhammer factor vanished before the series terminated.
class ZeroDenominatorTerm : public Error {
public:
    ZeroDenominatorTerm(long k, const std::string& param)
        : Error("zero denominator term at k=" + std::to_string(k) + " (parameter " + param + ")"),
          k(k),
          param(param) {}
    long k;
    std::string param;
};

// A closed-form coefficient denominator vanished at the given index.
class DegenerateParameter : public Error {
public:
    DegenerateParameter(const std::string& factor, long index)
        : Error("degenerate parameter point: factor " + factor + " vanishes at index " +
                std::to_string(index)),
          factor(factor),
          index(index) {}
    std::string factor;
    long index;
};

// Two interpolation nodes map to the same spectral abscissa.
class DuplicateAbscissa : public Error {
public:
    explicit DuplicateAbscissa(const std::string& msg) : Error(msg) {}
};

class SizeMismatch : public Error {
public:
    explicit SizeMismatch(const std::string& msg) : Error(msg) {}
};

class IndexOutOfRange : public Error {
public:
    explicit IndexOutOfRange(const std::string& msg) : Error(msg) {}
};

class ZeroMatrix : public Error {
public:
    explicit ZeroMatrix(const std::string& msg = "zero matrix has no leading part") : Error(msg) {}
};

class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& msg) : Error(msg) {}
};

class SamplingExhausted : public Error {
public:
    explicit SamplingExhausted(const std::string& msg) : Error(msg) {}
};

}  // namespace qwilson
