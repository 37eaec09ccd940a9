#include "superlase/perturbation.hpp"

#include <cmath>

#include "superlase/errors.hpp"

namespace superlase {

namespace {

void validate(int N, double c, double p)
{
    if (N < 1) {
        throw InvalidArgument("atom number N must be >= 1");
    }
    if (!(c > 0.0)) {
        throw InvalidArgument("coupling ratio c must be positive");
    }
    if (!(p >= 0.0)) {
        throw InvalidArgument("pump strength p must be non-negative");
    }
}

} // namespace

PerturbativeState perturbative_expand(int N, double c, double p)
{
    validate(N, c, p);
    const double n = N;
    const double p2 = p * p;
    PerturbativeState out;
    out.coherence_0_21 = -p * std::pow(n, 1.5) / std::sqrt(c);
    out.pop_21 = p2 * n * n * n / c;
    out.pop_11 = p2 * n * n;
    out.pop_0 = 1.0 - p2 * n * n * (n + c) / c;
    out.coherence_0_22 = out.pop_21 * std::sqrt((n - 1.0) / (2.0 * n));
    return out;
}

Occupations perturbative_occupations(int N, double c, double p)
{
    validate(N, c, p);
    const double n = N;
    const double p2 = p * p;
    Occupations out;
    out.S11 = p2 * n * n;
    out.S22 = p2 * n * n * n / c;
    out.S00 = n - p2 * n * n * (n + c) / c;
    return out;
}

} // namespace superlase
