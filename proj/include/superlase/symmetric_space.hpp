#pragma once

#include <cstddef>
#include <optional>
#include <vector>

namespace superlase {

/// Symmetric Dicke state |1^m; 2^l>: l atoms in level 2, m in level 1,
/// the remaining N - m - l in level 0.
struct StateIndex {
    int l = 0;
    int m = 0;

    friend bool operator==(const StateIndex&, const StateIndex&) = default;
};

/// Label of the retained coherence |1^m; 2^l><1^m; 2^r|.
struct MatrixIndex {
    int l = 0;
    int m = 0;
    int r = 0;

    friend bool operator==(const MatrixIndex&, const MatrixIndex&) = default;
};

/// Collective operators S_ij = z_i^dagger z_j.
enum class CollectiveOp { S02, S20, S12, S21, S01, S10, S00, S11, S22 };

CollectiveOp adjoint(CollectiveOp op) noexcept;
const char* to_string(CollectiveOp op) noexcept;

struct Transition {
    StateIndex target;
    double amplitude = 0.0;
};

/// Number of valid (l, m, r) triples for N atoms.
std::size_t dim(int N);

bool is_valid(int N, StateIndex state) noexcept;
bool is_valid(int N, MatrixIndex index) noexcept;

/// Matrix element of a collective operator on a symmetric state, from the
/// three-boson representation with occupations (N-m-l, m, l). Empty when
/// the operator annihilates the state.
std::optional<Transition> op_element(int N, CollectiveOp op, StateIndex state);

/**
 * Enumeration of the symmetric subspace for a fixed atom number.
 *
 * Matrix triples are stored lexicographically in (m, l, r), so each m-block
 * of (N-m+1)^2 entries is contiguous. States (l, m) are stored
 * lexicographically in (m, l).
 */
class SymmetricSpace {
public:
    explicit SymmetricSpace(int N);

    int atoms() const noexcept { return N_; }

    std::size_t matrix_dim() const noexcept { return matrix_dim_; }
    std::size_t state_count() const noexcept { return state_count_; }

    /// Side length of the m-block (number of allowed l for that m).
    int block_size(int m) const noexcept { return N_ - m + 1; }
    std::size_t block_offset(int m) const noexcept { return block_offsets_[static_cast<std::size_t>(m)]; }

    std::size_t offset(MatrixIndex index) const;
    MatrixIndex matrix_index(std::size_t offset) const;

    std::size_t state_offset(StateIndex state) const;
    StateIndex state(std::size_t offset) const;

private:
    int N_;
    std::size_t matrix_dim_;
    std::size_t state_count_;
    std::vector<std::size_t> block_offsets_;
    std::vector<std::size_t> state_block_offsets_;
};

} // namespace superlase
