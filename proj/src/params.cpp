#include "superlase/params.hpp"

#include <cmath>
#include <string>

#include "superlase/errors.hpp"

namespace superlase {

namespace {

void require_positive(double value, const char* name)
{
    if (!(value > 0.0) || !std::isfinite(value)) {
        throw InvalidArgument(std::string(name) + " must be a positive finite rate");
    }
}

void fill_pulse_parameters(DerivedParams& out)
{
    out.epsilon = (1.0 - out.c) / (1.0 + out.c);
    if (out.p > 0.0) {
        out.s = pulse_s(out.c, out.p);
        out.d = pulse_d(out.c, out.p);
    }
}

} // namespace

double pulse_s(double c, double p)
{
    if (!(c > 0.0) || !(p > 0.0)) {
        throw InvalidArgument("pulse parameters need c > 0 and p > 0");
    }
    return (1.0 + c) / (2.0 * p * std::sqrt(c));
}

double pulse_d(double c, double p)
{
    if (!(c > 0.0) || !(p > 0.0)) {
        throw InvalidArgument("pulse parameters need c > 0 and p > 0");
    }
    return (1.0 - c) / (2.0 * p * std::sqrt(c));
}

DerivedParams derive(const PhysicalParams& params)
{
    if (params.N < 1) {
        throw InvalidArgument("atom number N must be >= 1");
    }
    require_positive(params.Omega, "Omega");
    require_positive(params.g12, "g12");
    require_positive(params.g01, "g01");
    require_positive(params.kappa_a, "kappa_a");
    require_positive(params.kappa_b, "kappa_b");

    DerivedParams out;
    out.N = params.N;
    const double gamma_a = params.g12 * params.g12 / params.kappa_a;
    const double gamma_b = params.g01 * params.g01 / params.kappa_b;
    out.gamma_a = gamma_a;
    out.gamma_b = gamma_b;
    out.Gamma_a = gamma_a * params.N;
    out.Gamma_b = gamma_b * params.N;
    out.c = gamma_a / gamma_b;
    out.p = params.Omega / (params.N * std::sqrt(out.c) * gamma_b);
    fill_pulse_parameters(out);
    return out;
}

DerivedParams stationary_inputs(int N, double c, double p)
{
    if (N < 1) {
        throw InvalidArgument("atom number N must be >= 1");
    }
    if (!(c > 0.0) || !std::isfinite(c)) {
        throw InvalidArgument("coupling ratio c must be positive");
    }
    if (!(p >= 0.0) || !std::isfinite(p)) {
        throw InvalidArgument("pump strength p must be non-negative");
    }
    DerivedParams out;
    out.N = N;
    out.c = c;
    out.p = p;
    fill_pulse_parameters(out);
    return out;
}

} // namespace superlase
