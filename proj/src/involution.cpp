#include "webgeom/involution.hpp"

#include <algorithm>
#include <set>

#include "webgeom/error.hpp"

namespace webgeom {

namespace {

using U = UnknownLayout;
constexpr int R = 2;

int kron(int i, int j) { return i == j ? 1 : 0; }

class RowBuilder {
 public:
  explicit RowBuilder(RationalMatrix& rows) : rows_(rows) {}

  void add(std::initializer_list<std::pair<mpq_class, int>> terms) {
    std::vector<mpq_class> row(U::count, 0);
    for (const auto& [c, col] : terms) row[col] += c;
    if (std::any_of(row.begin(), row.end(), [](const mpq_class& v) { return sgn(v) != 0; }))
      rows_.push_back(std::move(row));
  }

 private:
  RationalMatrix& rows_;
};

std::vector<ZeroComponent> thm3_zeros() {
  using K = ZeroComponent::Kind;
  return {{K::P, {1, 1}}, {K::Q, {1, 1}}, {K::B, {0, 1, 1, 1}}};
}

std::vector<ZeroComponent> s22_zeros() {
  using K = ZeroComponent::Kind;
  std::vector<ZeroComponent> z = {{K::P, {1, 0}}, {K::P, {1, 1}}, {K::Q, {1, 0}}, {K::Q, {1, 1}}};
  for (int k = 0; k < R; ++k)
    for (int l = 0; l < R; ++l) z.push_back({K::B, {0, 1, k, l}});
  return z;
}

bool in_zero_set(const Scenario& s, ZeroComponent::Kind kind, std::array<int, 4> idx) {
  for (const auto& z : s.zero_set)
    if (z.kind == kind && z.idx == idx) return true;
  return false;
}

}  // namespace

std::string ZeroComponent::label() const {
  std::string out;
  switch (kind) {
    case Kind::P: out = "p"; break;
    case Kind::Q: out = "q"; break;
    case Kind::B: out = "b"; break;
  }
  const int n = kind == Kind::B ? 4 : 2;
  for (int k = 0; k < n; ++k) out += static_cast<char>('1' + idx[k]);
  return out;
}

Scenario unconstrained_scenario() {
  Scenario s{ScenarioId::Unconstrained, "unconstrained", {}, {}, false};
  s.stated.N = 26;
  s.stated.p_block = 6;
  s.stated.b_block = 20;
  return s;
}

Scenario scenario_by_name(std::string_view name) {
  using K = ZeroComponent::Kind;
  if (name == "thm3") {
    Scenario s{ScenarioId::Thm3, "thm3", thm3_zeros(), {}, false};
    s.stated = {2, 4, 13, 29, 29, 13, 16, 13, {}};
    return s;
  }
  if (name == "thm7") {
    auto z = thm3_zeros();
    z.push_back({K::B, {1, 1, 1, 1}});
    Scenario s{ScenarioId::Thm7, "thm7", z, {}, false};
    s.stated = {2, 4, 12, 26, 26, 14, 12, 12, {}};
    return s;
  }
  if (name == "thm8") {
    auto z = s22_zeros();
    z.push_back({K::B, {1, 1, 1, 1}});
    Scenario s{ScenarioId::Thm8, "thm8", z, {}, false};
    s.stated = {1, 3, 8, 18, 18, 10, 8, 10, {}};
    return s;
  }
  if (name == "s22") {
    Scenario s{ScenarioId::S22, "s22", s22_zeros(), {}, true};
    s.stated.n_quadratic = 1;
    s.stated.n_cubic = 3;
    s.stated.s3 = 4;
    return s;
  }
  throw Error(ErrorCode::UnknownScenario,
              "unknown scenario '" + std::string(name) + "', expected thm3, thm7, thm8, s22 or all");
}

std::vector<Scenario> all_scenarios() {
  return {scenario_by_name("thm3"), scenario_by_name("thm7"), scenario_by_name("thm8"),
          scenario_by_name("s22")};
}

std::string UnknownLayout::name(int col) {
  static const char* heads[] = {"pbar_", "ptil_", "qbar_", "qtil_"};
  std::string out;
  if (col < 32) {
    out = heads[col / 8];
    const int r = col % 8;
    for (int bit = 2; bit >= 0; --bit) out += static_cast<char>('1' + ((r >> bit) & 1));
    return out;
  }
  const int r = (col - 32) % 32;
  out = col < 64 ? "bbar^" : "btil^";
  out += static_cast<char>('1' + ((r >> 4) & 1));
  out += '_';
  for (int bit = 3; bit >= 0; --bit) out += static_cast<char>('1' + ((r >> bit) & 1));
  return out;
}

RationalMatrix build_relations(const Scenario& s) {
  RationalMatrix rows;
  RowBuilder row(rows);
  const mpq_class h(1, 2);

  for (int i = 0; i < R; ++i)
    for (int j = 0; j < R; ++j)
      for (int k = 0; k < R; ++k)
        for (int l = 0; l < R; ++l)
          for (int m = 0; m < R; ++m) {
            // skew parts of the prolonged curvature
            row.add({{h, U::bbar(i, j, k, l, m)}, {-h, U::bbar(i, j, m, l, k)}});
            row.add({{h, U::btil(i, j, k, l, m)}, {-h, U::btil(i, j, k, m, l)}});
            // traces of the prolonged curvature
            row.add({{h, U::bbar(i, j, l, k, m)}, {-h, U::bbar(i, k, l, j, m)},
                     {-h * kron(i, k), U::pbar(j, l, m)}, {h * kron(i, j), U::pbar(k, l, m)}});
            row.add({{h, U::btil(i, j, l, k, m)}, {-h, U::btil(i, k, l, j, m)},
                     {-h * kron(i, k), U::ptil(j, l, m)}, {h * kron(i, j), U::ptil(k, l, m)}});
            row.add({{h, U::bbar(i, j, k, l, m)}, {-h, U::bbar(i, k, j, l, m)},
                     {-h * kron(i, k), U::qbar(j, l, m)}, {h * kron(i, j), U::qbar(k, l, m)}});
            row.add({{h, U::btil(i, j, k, l, m)}, {-h, U::btil(i, k, j, l, m)},
                     {-h * kron(i, k), U::qtil(j, l, m)}, {h * kron(i, j), U::qtil(k, l, m)}});
          }
  for (int i = 0; i < R; ++i)
    for (int k = 0; k < R; ++k)
      for (int l = 0; l < R; ++l) {
        row.add({{h, U::pbar(i, l, k)}, {-h, U::pbar(i, k, l)}});
        row.add({{h, U::qtil(i, l, k)}, {-h, U::qtil(i, k, l)}});
        // ptil_jkl = qbar_jlk up to known terms
        row.add({{-1, U::ptil(i, k, l)}, {1, U::qbar(i, l, k)}});
      }

  using K = ZeroComponent::Kind;
  for (const auto& z : s.zero_set) {
    for (int m = 0; m < R; ++m) {
      const auto& x = z.idx;
      switch (z.kind) {
        case K::P:
          row.add({{1, U::pbar(x[0], x[1], m)}});
          row.add({{1, U::ptil(x[0], x[1], m)}});
          break;
        case K::Q:
          row.add({{1, U::qbar(x[0], x[1], m)}});
          row.add({{1, U::qtil(x[0], x[1], m)}});
          break;
        case K::B:
          row.add({{1, U::bbar(x[0], x[1], x[2], x[3], m)}});
          row.add({{1, U::btil(x[0], x[1], x[2], x[3], m)}});
          break;
      }
    }
  }
  return rows;
}

std::vector<int> rref(RationalMatrix& m) {
  std::vector<int> pivots;
  if (m.empty()) return pivots;
  const int rows = static_cast<int>(m.size());
  const int cols = static_cast<int>(m[0].size());
  int r = 0;
  for (int c = 0; c < cols && r < rows; ++c) {
    int piv = -1;
    for (int k = r; k < rows; ++k)
      if (sgn(m[k][c]) != 0) {
        piv = k;
        break;
      }
    if (piv < 0) continue;
    std::swap(m[r], m[piv]);
    const mpq_class inv = 1 / m[r][c];
    for (auto& v : m[r]) v *= inv;
    for (int k = 0; k < rows; ++k) {
      if (k == r || sgn(m[k][c]) == 0) continue;
      const mpq_class f = m[k][c];
      for (int j = c; j < cols; ++j) m[k][j] -= f * m[r][j];
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

int rank(RationalMatrix m) { return static_cast<int>(rref(m).size()); }

RationalMatrix null_space(const RationalMatrix& m, int columns) {
  RationalMatrix e = m;
  const std::vector<int> pivots = rref(e);
  std::vector<bool> is_pivot(columns, false);
  for (int c : pivots) is_pivot[c] = true;
  RationalMatrix basis;
  for (int free = 0; free < columns; ++free) {
    if (is_pivot[free]) continue;
    std::vector<mpq_class> v(columns, 0);
    v[free] = 1;
    for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -e[r][free];
    basis.push_back(std::move(v));
  }
  return basis;
}

SolutionDimensions solution_dimensions(const Scenario& s) {
  const RationalMatrix rel = build_relations(s);
  const RationalMatrix basis = null_space(rel, U::count);
  SolutionDimensions d;
  d.N = static_cast<int>(basis.size());
  if (d.N == 0) return d;
  RationalMatrix proj_p, proj_b;
  for (const auto& v : basis) {
    proj_p.emplace_back(v.begin(), v.begin() + 32);
    proj_b.emplace_back(v.begin() + 32, v.end());
  }
  d.p_block = rank(proj_p);
  d.b_projection = rank(proj_b);
  d.b_block = d.N - d.p_block;
  return d;
}

int unknown_form_count(const Scenario& s) {
  // Columns: p (4), q (4), b (16).
  const auto P = [](int j, int k) { return 2 * j + k; };
  const auto Qc = [](int j, int k) { return 4 + 2 * j + k; };
  const auto B = [](int i, int j, int k, int l) { return 8 + 8 * i + 4 * j + 2 * k + l; };
  RationalMatrix rows;
  const auto add = [&](std::vector<std::pair<int, int>> terms) {
    std::vector<mpq_class> row(24, 0);
    for (auto [c, col] : terms) row[col] += c;
    if (std::any_of(row.begin(), row.end(), [](const mpq_class& v) { return sgn(v) != 0; }))
      rows.push_back(std::move(row));
  };
  for (int i = 0; i < R; ++i)
    for (int j = 0; j < R; ++j)
      for (int k = 0; k < R; ++k)
        for (int l = 0; l < R; ++l) {
          add({{1, B(i, j, l, k)}, {-1, B(i, k, l, j)}, {-kron(i, k), P(j, l)}, {kron(i, j), P(k, l)}});
          add({{1, B(i, j, k, l)}, {-1, B(i, k, j, l)}, {-kron(i, k), Qc(j, l)}, {kron(i, j), Qc(k, l)}});
        }
  using K = ZeroComponent::Kind;
  for (const auto& z : s.zero_set) {
    const auto& x = z.idx;
    const int col = z.kind == K::P ? P(x[0], x[1]) : z.kind == K::Q ? Qc(x[0], x[1]) : B(x[0], x[1], x[2], x[3]);
    add({{1, col}});
  }
  return 24 - rank(rows);
}

int quadratic_equation_count(const Scenario& s) {
  using K = ZeroComponent::Kind;
  int n = 0;
  for (int j = 0; j < R; ++j) {
    bool all_zero = true;
    for (int k = 0; k < R; ++k)
      all_zero = all_zero && in_zero_set(s, K::P, {j, k}) && in_zero_set(s, K::Q, {j, k});
    if (!all_zero) ++n;
  }
  return n;
}

int cubic_equation_count(const Scenario& s) {
  using K = ZeroComponent::Kind;
  int n = 0;
  for (int i = 0; i < R; ++i)
    for (int j = 0; j < R; ++j) {
      bool all_zero = true;
      for (int k = 0; k < R; ++k)
        for (int l = 0; l < R; ++l) all_zero = all_zero && in_zero_set(s, K::B, {i, j, k, l});
      if (!all_zero) ++n;
    }
  return n;
}

CharacterTable character_table(const Scenario& s) {
  CharacterTable t;
  t.scenario = s.name;
  t.soft = s.soft;
  t.q = unknown_form_count(s);
  t.n_quadratic = quadratic_equation_count(s);
  t.n_cubic = cubic_equation_count(s);
  t.s1 = t.n_quadratic;
  t.s2 = t.n_quadratic + t.n_cubic;
  t.s3 = t.q - t.s1 - t.s2;
  t.Q = t.s1 + 2 * t.s2 + 3 * t.s3;
  const SolutionDimensions d = solution_dimensions(s);
  t.N = d.N;
  t.p_block = d.p_block;
  t.b_block = d.b_block;
  t.involutive = t.Q == t.N;

  const auto& st = s.stated;
  if (s.id != ScenarioId::Unconstrained && (t.n_quadratic != st.n_quadratic || t.n_cubic != st.n_cubic))
    t.notes.push_back("equation counts differ from the stated " + std::to_string(st.n_quadratic) +
                      " quadratic / " + std::to_string(st.n_cubic) + " cubic");
  if (s.id == ScenarioId::Thm7)
    t.notes.push_back("q is taken as 12, the value the character arithmetic s3 = 12 - 8 uses");
  if (st.N && *st.N != t.N)
    t.notes.push_back("expected N = " + std::to_string(*st.N) + ", computed " + std::to_string(t.N));
  if (st.p_block && *st.p_block != t.p_block)
    t.notes.push_back("expected " + std::to_string(*st.p_block) +
                      " independent p, q derivatives, computed " + std::to_string(t.p_block));
  if (st.p_list_total && st.p_block && *st.p_list_total != *st.p_block)
    t.notes.push_back("the listed p, q derivatives number " + std::to_string(*st.p_list_total) +
                      ", not " + std::to_string(*st.p_block));
  if (st.b_block && *st.b_block != t.b_block)
    t.notes.push_back("expected " + std::to_string(*st.b_block) +
                      " independent b derivatives, computed " + std::to_string(t.b_block));
  if (t.N > t.Q)
    t.notes.push_back("N exceeds Q, so the counted equations are dependent and s1, s2, s3 are not the reduced characters");
  if (s.soft) {
    t.notes.push_back("informational: the involution test for this case was left unverified");
    if (st.s3)
      t.notes.push_back(std::string(t.s3 == *st.s3 ? "s3 matches" : "s3 differs from") +
                        " the expected " + std::to_string(*st.s3) + " arbitrary functions");
  }
  return t;
}

}  // namespace webgeom
