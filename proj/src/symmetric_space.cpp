#include "superlase/symmetric_space.hpp"

#include <cmath>
#include <string>

#include "superlase/errors.hpp"

namespace superlase {

CollectiveOp adjoint(CollectiveOp op) noexcept
{
    switch (op) {
    case CollectiveOp::S02: return CollectiveOp::S20;
    case CollectiveOp::S20: return CollectiveOp::S02;
    case CollectiveOp::S12: return CollectiveOp::S21;
    case CollectiveOp::S21: return CollectiveOp::S12;
    case CollectiveOp::S01: return CollectiveOp::S10;
    case CollectiveOp::S10: return CollectiveOp::S01;
    default: return op;
    }
}

const char* to_string(CollectiveOp op) noexcept
{
    switch (op) {
    case CollectiveOp::S02: return "S02";
    case CollectiveOp::S20: return "S20";
    case CollectiveOp::S12: return "S12";
    case CollectiveOp::S21: return "S21";
    case CollectiveOp::S01: return "S01";
    case CollectiveOp::S10: return "S10";
    case CollectiveOp::S00: return "S00";
    case CollectiveOp::S11: return "S11";
    case CollectiveOp::S22: return "S22";
    }
    return "?";
}

std::size_t dim(int N)
{
    if (N < 0) {
        throw InvalidArgument("negative atom number");
    }
    std::size_t total = 0;
    for (int m = 0; m <= N; ++m) {
        const auto side = static_cast<std::size_t>(N - m + 1);
        total += side * side;
    }
    return total;
}

bool is_valid(int N, StateIndex state) noexcept
{
    return state.l >= 0 && state.m >= 0 && state.l + state.m <= N;
}

bool is_valid(int N, MatrixIndex index) noexcept
{
    return index.l >= 0 && index.m >= 0 && index.r >= 0 && index.m + index.l <= N
        && index.m + index.r <= N;
}

std::optional<Transition> op_element(int N, CollectiveOp op, StateIndex state)
{
    if (!is_valid(N, state)) {
        throw InvalidArgument("invalid symmetric state (l=" + std::to_string(state.l)
                              + ", m=" + std::to_string(state.m) + ") for N=" + std::to_string(N));
    }
    // Occupations of levels 0, 1, 2.
    const double n0 = N - state.m - state.l;
    const double n1 = state.m;
    const double n2 = state.l;

    auto hop = [&](double from, double to_after, int dl, int dm) -> std::optional<Transition> {
        const double weight = from * to_after;
        if (weight <= 0.0) {
            return std::nullopt;
        }
        return Transition{{state.l + dl, state.m + dm}, std::sqrt(weight)};
    };

    switch (op) {
    case CollectiveOp::S00: return Transition{state, n0};
    case CollectiveOp::S11: return Transition{state, n1};
    case CollectiveOp::S22: return Transition{state, n2};
    // z_i^dagger z_j: remove one from j, add one to i.
    case CollectiveOp::S20: return hop(n0, n2 + 1, +1, 0);
    case CollectiveOp::S02: return hop(n2, n0 + 1, -1, 0);
    case CollectiveOp::S12: return hop(n2, n1 + 1, -1, +1);
    case CollectiveOp::S21: return hop(n1, n2 + 1, +1, -1);
    case CollectiveOp::S01: return hop(n1, n0 + 1, 0, -1);
    case CollectiveOp::S10: return hop(n0, n1 + 1, 0, +1);
    }
    return std::nullopt;
}

SymmetricSpace::SymmetricSpace(int N) : N_(N)
{
    if (N < 0) {
        throw InvalidArgument("negative atom number");
    }
    block_offsets_.resize(static_cast<std::size_t>(N) + 2);
    state_block_offsets_.resize(static_cast<std::size_t>(N) + 2);
    std::size_t total = 0;
    std::size_t states = 0;
    for (int m = 0; m <= N; ++m) {
        block_offsets_[static_cast<std::size_t>(m)] = total;
        state_block_offsets_[static_cast<std::size_t>(m)] = states;
        const auto side = static_cast<std::size_t>(N - m + 1);
        total += side * side;
        states += side;
    }
    block_offsets_.back() = total;
    state_block_offsets_.back() = states;
    matrix_dim_ = total;
    state_count_ = states;
}

std::size_t SymmetricSpace::offset(MatrixIndex index) const
{
    if (!is_valid(N_, index)) {
        throw InvalidArgument("invalid matrix index (" + std::to_string(index.l) + ","
                              + std::to_string(index.m) + "," + std::to_string(index.r) + ")");
    }
    const auto side = static_cast<std::size_t>(block_size(index.m));
    return block_offset(index.m) + static_cast<std::size_t>(index.l) * side
        + static_cast<std::size_t>(index.r);
}

MatrixIndex SymmetricSpace::matrix_index(std::size_t offset) const
{
    if (offset >= matrix_dim_) {
        throw InvalidArgument("matrix offset out of range");
    }
    int m = 0;
    while (block_offsets_[static_cast<std::size_t>(m) + 1] <= offset) {
        ++m;
    }
    const auto local = offset - block_offset(m);
    const auto side = static_cast<std::size_t>(block_size(m));
    return {static_cast<int>(local / side), m, static_cast<int>(local % side)};
}

std::size_t SymmetricSpace::state_offset(StateIndex state) const
{
    if (!is_valid(N_, state)) {
        throw InvalidArgument("invalid symmetric state");
    }
    return state_block_offsets_[static_cast<std::size_t>(state.m)] + static_cast<std::size_t>(state.l);
}

StateIndex SymmetricSpace::state(std::size_t offset) const
{
    if (offset >= state_count_) {
        throw InvalidArgument("state offset out of range");
    }
    int m = 0;
    while (state_block_offsets_[static_cast<std::size_t>(m) + 1] <= offset) {
        ++m;
    }
    return {static_cast<int>(offset - state_block_offsets_[static_cast<std::size_t>(m)]), m};
}

} // namespace superlase
