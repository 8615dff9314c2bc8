#pragma once

#include <gmpxx.h>

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace webgeom {

/// Tensor component forced to vanish by a scenario. Indices are 0-based:
/// P/Q use (j, k), B uses (i, j, k, l) for b^i_jkl.
struct ZeroComponent {
  enum class Kind { P, Q, B } kind;
  std::array<int, 4> idx{};

  std::string label() const;  // 1-based, e.g. "p22", "b1222"
};

enum class ScenarioId { Unconstrained, Thm3, Thm7, Thm8, S22 };

/// Figures printed alongside each existence theorem.
struct StatedCounts {
  int n_quadratic = 0;  // not stated for the unconstrained system
  int n_cubic = 0;
  std::optional<int> q;
  std::optional<int> Q;
  std::optional<int> N;
  std::optional<int> p_block;  // independent derivatives of p, q
  std::optional<int> b_block;  // independent derivatives of b
  /// Sizes of the explicit function lists given for the p, q derivatives.
  std::optional<int> p_list_total;
  /// Expected s3 for an informational scenario.
  std::optional<int> s3;
};

struct Scenario {
  ScenarioId id;
  std::string name;
  std::vector<ZeroComponent> zero_set;
  StatedCounts stated;
  /// Informational scenario: verdict is reported, never enforced.
  bool soft = false;
};

/// Throws UnknownScenario for anything other than thm3, thm7, thm8, s22.
Scenario scenario_by_name(std::string_view name);
Scenario unconstrained_scenario();
/// thm3, thm7, thm8, s22 in that order.
std::vector<Scenario> all_scenarios();

using RationalMatrix = std::vector<std::vector<mpq_class>>;

/// Column layout of the 96 third-order unknowns: pbar, ptil, qbar, qtil
/// (8 each), then bbar, btil (32 each).
struct UnknownLayout {
  static constexpr int count = 96;
  static int pbar(int j, int k, int m) { return 0 + 4 * j + 2 * k + m; }
  static int ptil(int j, int k, int m) { return 8 + 4 * j + 2 * k + m; }
  static int qbar(int j, int k, int m) { return 16 + 4 * j + 2 * k + m; }
  static int qtil(int j, int k, int m) { return 24 + 4 * j + 2 * k + m; }
  static int bbar(int i, int j, int k, int l, int m) { return 32 + 16 * i + 8 * j + 4 * k + 2 * l + m; }
  static int btil(int i, int j, int k, int l, int m) { return 64 + 16 * i + 8 * j + 4 * k + 2 * l + m; }
  static std::string name(int col);  // e.g. "pbar_112", "btil^2_1122"
};

/// Homogeneous linear relations on the 96 unknowns, plus the unit rows for
/// the prolongations of every zero-set member.
RationalMatrix build_relations(const Scenario& s);

/// Reduced row echelon form in place; returns the pivot columns.
std::vector<int> rref(RationalMatrix& m);
int rank(RationalMatrix m);

/// Basis of the solution space, one vector per free column.
RationalMatrix null_space(const RationalMatrix& m, int columns);

struct CharacterTable {
  std::string scenario;
  int q = 0;
  int s1 = 0, s2 = 0, s3 = 0;
  int Q = 0;
  int N = 0;
  bool involutive = false;
  int n_quadratic = 0;
  int n_cubic = 0;
  int p_block = 0;  // dimension of the solution space projected onto p, q derivatives
  int b_block = 0;  // remaining parameters carried by b derivatives alone
  bool soft = false;
  std::vector<std::string> notes;
};

/// Unknown 1-forms: the 24 differentials of p, q, b modulo the algebraic
/// relations between p, q, b and the zero set.
int unknown_form_count(const Scenario& s);
/// Number of rows j of p, q not entirely in the zero set.
int quadratic_equation_count(const Scenario& s);
/// Number of pairs (i, j) with b^i_j.. not entirely in the zero set.
int cubic_equation_count(const Scenario& s);

CharacterTable character_table(const Scenario& s);

/// N, p_block and b_block without character bookkeeping.
struct SolutionDimensions {
  int N = 0;
  int p_block = 0;
  int b_block = 0;
  /// Rank of the solution space projected onto the b derivatives.
  int b_projection = 0;
};
SolutionDimensions solution_dimensions(const Scenario& s);

}  // namespace webgeom
