#pragma once

// Helpers shared by the measure translation units. Not installed.

#include "specdim/measure.hpp"

#include <cstdint>
#include <utility>

namespace specdim::detail {

std::int64_t pow_or_throw(std::int64_t b, int n);

/// Index along one coordinate of the (base, depth) cell containing the atom.
std::int64_t atom_index(const Atomic& a, const Atom& atom, std::size_t coord, int base, int depth);

bool atom_in_cell(const Atomic& a, const Atom& atom, const Cell& cell);

/// Levels of a digit measure strictly between `from` and `to` (exclusive/inclusive).
std::int64_t digit_levels_between(const Digit& d, std::int64_t from, std::int64_t to);

/// True when only finitely many random digits remain below the prefix.
bool digit_tail_finite(const Digit& d);

double digit_cell_mass(const Digit& d, int depth, std::int64_t index);
double tree_cell_mass(const DyadicTree& t, int base, int depth, std::int64_t index);

/// Splits a cell of a product/mixed space into its first `left_dim` coordinates
/// and the rest.
std::pair<Cell, Cell> split_cell(const Cell& cell, std::size_t left_dim);

/// Base shared by both factors (0 when both accept any base).
int combine_bases(int a, int b);

}  // namespace specdim::detail

namespace specdim::detail {

/// Finite atomic form of specs with enumerable support (atomic, finite digit,
/// and products/mixtures/affine images of those). nullopt otherwise or when the
/// atom count exceeds max_atoms.
std::optional<Atomic> materialize(const MeasureSpec& spec, std::uint64_t max_atoms);

}  // namespace specdim::detail
