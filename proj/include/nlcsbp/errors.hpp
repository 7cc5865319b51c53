#ifndef NLCSBP_ERRORS_HPP
#define NLCSBP_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace nlcsbp {

struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

struct ConvergenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InversionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NotIntegrable : std::domain_error {
    using std::domain_error::domain_error;
};

struct DeltaUndefined : std::domain_error {
    using std::domain_error::domain_error;
};

struct NotEntrance : std::domain_error {
    using std::domain_error::domain_error;
};

struct Divergent : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InconclusiveTail : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SummabilityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SeriesDiverges : std::runtime_error {
    SeriesDiverges(const std::string& msg, double radius_hint)
        : std::runtime_error(msg), radius_hint(radius_hint) {}
    double radius_hint;
};

struct NegativeVariance : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct OutOfRange : std::domain_error {
    using std::domain_error::domain_error;
};

struct NoRegime : std::domain_error {
    using std::domain_error::domain_error;
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace nlcsbp

#endif
