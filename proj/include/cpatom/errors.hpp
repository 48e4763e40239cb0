#pragma once

#include <stdexcept>
#include <string>

namespace cpatom {

enum class ErrorKind { Usage, Domain, Numerical, Regime };

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

struct UsageError : Error {
    explicit UsageError(const std::string& w) : Error(ErrorKind::Usage, w) {}
};

struct DomainError : Error {
    explicit DomainError(const std::string& w) : Error(ErrorKind::Domain, w) {}
};

// Evaluation exactly on a light-cone pole; callers are expected to subtract it.
struct PoleError : DomainError {
    explicit PoleError(const std::string& w) : DomainError(w) {}
};

struct NumericalError : Error {
    explicit NumericalError(const std::string& w) : Error(ErrorKind::Numerical, w) {}
};

struct TruncationError : NumericalError {
    explicit TruncationError(const std::string& w) : NumericalError(w) {}
};

struct IntegrationError : NumericalError {
    explicit IntegrationError(const std::string& w) : NumericalError(w) {}
};

struct IllConditionedError : NumericalError {
    explicit IllConditionedError(const std::string& w) : NumericalError(w) {}
};

struct StepSizeError : NumericalError {
    explicit StepSizeError(const std::string& w) : NumericalError(w) {}
};

struct RegimeError : Error {
    explicit RegimeError(const std::string& w) : Error(ErrorKind::Regime, w) {}
};

struct UnstableTrapError : RegimeError {
    explicit UnstableTrapError(const std::string& w) : RegimeError(w) {}
};

struct BurnInError : RegimeError {
    explicit BurnInError(const std::string& w) : RegimeError(w) {}
};

}  // namespace cpatom
