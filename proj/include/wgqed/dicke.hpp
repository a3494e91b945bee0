#pragma once

#include <string_view>

namespace wgqed {

/// Single-excitation Dicke states of the atom pair.
///
/// The symmetric amplitude couples to the delayed field with a minus sign,
/// the antisymmetric one with a plus sign.
enum class DickeBranch { symmetric, antisymmetric };

constexpr int branch_sign(DickeBranch branch) {
  return branch == DickeBranch::symmetric ? -1 : +1;
}

constexpr std::string_view to_string(DickeBranch branch) {
  return branch == DickeBranch::symmetric ? "symmetric" : "antisymmetric";
}

}  // namespace wgqed
