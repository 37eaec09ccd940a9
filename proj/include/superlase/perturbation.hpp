#pragma once

namespace superlase {

/// Coefficients of the small-p stationary density operator through order p^2.
/// Coherences multiply (|2^k><0| + h.c.); populations multiply |x><x|.
struct PerturbativeState {
    double coherence_0_21 = 0.0; ///< |2^1><0|, order p
    double coherence_0_22 = 0.0; ///< |2^2><0|, order p^2
    double pop_0 = 1.0;
    double pop_21 = 0.0;
    double pop_11 = 0.0;
};

struct Occupations {
    double S00 = 0.0;
    double S11 = 0.0;
    double S22 = 0.0;

    double total() const noexcept { return S00 + S11 + S22; }
};

PerturbativeState perturbative_expand(int N, double c, double p);

Occupations perturbative_occupations(int N, double c, double p);

} // namespace superlase
