#include "infopt/model.hpp"

#include <cmath>

#include "infopt/error.hpp"

namespace infopt {

namespace {

void require(bool ok, const char* field, const char* bound) {
    if (!ok) throw OutOfRangeError(field, bound);
}

}  // namespace

std::string_view to_string(Model model) noexcept {
    return model == Model::OneFactor ? "one_factor" : "two_factor";
}

std::string_view to_string(OptionKind kind) noexcept {
    return kind == OptionKind::Call ? "call" : "put";
}

void validate(const EpidemicParams& p) {
    require(std::isfinite(p.beta) && p.beta > 0.0, "beta", "beta > 0");
    require(std::isfinite(p.gamma) && p.gamma > 0.0, "gamma", "gamma > 0");
    require(std::isfinite(p.sigma) && p.sigma >= 0.0, "sigma", "sigma >= 0");
    require(std::isfinite(p.zeta) && p.zeta >= 0.0, "zeta", "zeta >= 0");
    require(std::isfinite(p.rho) && p.rho >= -1.0 && p.rho <= 1.0, "rho", "-1 <= rho <= 1");
}

void validate(const SirState& s) {
    require(std::isfinite(s.x) && s.x >= 0.0 && s.x <= 1.0, "x", "0 <= x <= 1");
    require(std::isfinite(s.y) && s.y >= 0.0 && s.y <= 1.0, "y", "0 <= y <= 1");
}

void validate(const OptionTerms& terms) {
    require(std::isfinite(terms.strike) && terms.strike >= 0.0 && terms.strike <= 1.0, "strike",
            "0 <= strike <= 1");
    require(std::isfinite(terms.expiry) && terms.expiry > 0.0, "expiry", "expiry > 0");
    require(std::isfinite(terms.discount_rate), "discount_rate", "finite discount rate");
    require(std::isfinite(terms.notional) && terms.notional > 0.0, "notional", "notional > 0");
}

std::pair<EpidemicParams, SirState> validate_params(const EpidemicParams& p, const SirState& s) {
    validate(p);
    validate(s);
    return {p, s};
}

double eta(double x, const EpidemicParams& p) noexcept {
    if (p.zeta == 0.0) return p.sigma * x;
    return std::sqrt(infected_log_variance(x, p, Model::TwoFactor));
}

}  // namespace infopt
