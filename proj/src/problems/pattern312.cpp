#include "patternboost/problems/pattern312.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace pb::problems {

BinaryMatrix BinaryMatrix::zeros(int n) {
  if (n < 1) throw std::invalid_argument("matrix side must be positive");
  return BinaryMatrix{n, std::vector<std::uint8_t>(static_cast<std::size_t>(n) * n, 0)};
}

BinaryMatrix BinaryMatrix::identity(int n) {
  auto m = zeros(n);
  for (int i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

BinaryMatrix BinaryMatrix::from_payload(int n, const Payload& payload) {
  if (payload.size() != static_cast<std::size_t>(n) * n)
    throw ShapeError("matrix payload has " + std::to_string(payload.size()) + " entries, expected " +
                     std::to_string(n * n));
  for (auto b : payload)
    if (b > 1) throw ShapeError("matrix payload symbol must be 0 or 1");
  return BinaryMatrix{n, payload};
}

BinaryMatrix BinaryMatrix::from_rows(const std::vector<std::string>& rows) {
  auto m = zeros(static_cast<int>(rows.size()));
  for (int r = 0; r < m.n; ++r) {
    if (rows[r].size() != rows.size()) throw ShapeError("matrix rows must form a square");
    for (int c = 0; c < m.n; ++c) {
      char ch = rows[r][c];
      if (ch != '0' && ch != '1') throw ShapeError("matrix rows must be 0/1 strings");
      m.at(r, c) = ch == '1';
    }
  }
  return m;
}

std::size_t BinaryMatrix::ones() const {
  return static_cast<std::size_t>(std::count(a.begin(), a.end(), std::uint8_t{1}));
}

namespace {

// prefix[r][c] = ones in rows < r and columns < c.
class Prefix {
 public:
  explicit Prefix(const BinaryMatrix& m) : n_(m.n), p_(static_cast<std::size_t>(m.n + 1) * (m.n + 1), 0) {
    for (int r = 0; r < n_; ++r)
      for (int c = 0; c < n_; ++c) cell(r + 1, c + 1) = cell(r, c + 1) + cell(r + 1, c) - cell(r, c) + m.at(r, c);
  }
  /// Ones in rows [r0, r1) x columns [c0, c1); empty ranges give 0.
  int rect(int r0, int r1, int c0, int c1) const {
    if (r0 >= r1 || c0 >= c1) return 0;
    return get(r1, c1) - get(r0, c1) - get(r1, c0) + get(r0, c0);
  }

 private:
  int get(int r, int c) const { return p_[static_cast<std::size_t>(r) * (n_ + 1) + c]; }
  int& cell(int r, int c) { return p_[static_cast<std::size_t>(r) * (n_ + 1) + c]; }
  int n_;
  std::vector<int> p_;
};

struct Cell {
  int r, c;
};

std::vector<Cell> ones_of(const BinaryMatrix& m) {
  std::vector<Cell> out;
  for (int r = 0; r < m.n; ++r)
    for (int c = 0; c < m.n; ++c)
      if (m.at(r, c)) out.push_back({r, c});
  return out;
}

}  // namespace

bool contains_312(const BinaryMatrix& m) {
  const int n = m.n;
  // For the middle row r2 take its leftmost one c1; then pick the smallest column
  // c2 > c1 holding a one below r2 and ask for a one above r2 right of c2.
  std::vector<int> max_col_above(static_cast<std::size_t>(n), -1);
  int running = -1;
  for (int r = 0; r < n; ++r) {
    max_col_above[r] = running;
    for (int c = n - 1; c >= 0; --c)
      if (m.at(r, c)) {
        running = std::max(running, c);
        break;
      }
  }
  std::vector<std::uint8_t> below(static_cast<std::size_t>(n), 0);
  for (int r2 = n - 2; r2 >= 1; --r2) {
    for (int c = 0; c < n; ++c) below[c] |= m.at(r2 + 1, c);
    int c1 = -1;
    for (int c = 0; c < n; ++c)
      if (m.at(r2, c)) {
        c1 = c;
        break;
      }
    if (c1 < 0 || max_col_above[r2] < 0) continue;
    for (int c2 = c1 + 1; c2 < n; ++c2)
      if (below[c2]) {
        if (max_col_above[r2] > c2) return true;
        break;
      }
  }
  return false;
}

std::vector<std::size_t> count_312_per_cell(const BinaryMatrix& m) {
  const int n = m.n;
  std::vector<std::size_t> per(static_cast<std::size_t>(n) * n, 0);
  const Prefix pre(m);
  const auto ones = ones_of(m);
  auto idx = [n](Cell x) { return static_cast<std::size_t>(x.r) * n + x.c; };

  for (Cell hi : ones)      // (r1, c3)
    for (Cell lo : ones) {  // (r3, c2)
      if (lo.r <= hi.r + 1 || lo.c >= hi.c) continue;
      // middle ones (r2, c1): hi.r < r2 < lo.r, c1 < c2
      auto k = static_cast<std::size_t>(pre.rect(hi.r + 1, lo.r, 0, lo.c));
      per[idx(hi)] += k;
      per[idx(lo)] += k;
    }
  for (Cell mid : ones)     // (r2, c1)
    for (Cell lo : ones) {  // (r3, c2)
      if (lo.r <= mid.r || lo.c <= mid.c) continue;
      // top ones (r1, c3): r1 < r2, c3 > c2
      per[idx(mid)] += static_cast<std::size_t>(pre.rect(0, mid.r, lo.c + 1, n));
    }
  return per;
}

std::size_t count_312(const BinaryMatrix& m) {
  const int n = m.n;
  const Prefix pre(m);
  const auto ones = ones_of(m);
  std::size_t total = 0;
  for (Cell mid : ones)
    for (Cell lo : ones)
      if (lo.r > mid.r && lo.c > mid.c) total += static_cast<std::size_t>(pre.rect(0, mid.r, lo.c + 1, n));
  return total;
}

namespace {

bool creates_312(const BinaryMatrix& m, const Prefix& pre, const std::vector<Cell>& ones, int r, int c) {
  const int n = m.n;
  for (Cell x : ones) {
    // (r, c) as the top one (r1, c3): x is the middle (r2, c1) with r2 > r, c1 < c,
    // and a bottom one (r3, c2) must sit in rows > r2, columns (c1, c).
    if (x.r > r && x.c < c && pre.rect(x.r + 1, n, x.c + 1, c) > 0) return true;
    // (r, c) as the middle one: x is the bottom (r3 > r, c2 > c); need a top one in
    // rows < r, columns > c2.
    if (x.r > r && x.c > c && pre.rect(0, r, x.c + 1, n) > 0) return true;
    // (r, c) as the bottom one: x is the middle (r2 < r, c1 < c); need a top one in
    // rows < r2, columns > c.
    if (x.r < r && x.c < c && pre.rect(0, x.r, c + 1, n) > 0) return true;
  }
  return false;
}

}  // namespace

bool would_create_312(const BinaryMatrix& m, int r, int c) {
  return creates_312(m, Prefix(m), ones_of(m), r, c);
}

bool is_maximal_312_free(const BinaryMatrix& m) {
  if (contains_312(m)) return false;
  const Prefix pre(m);
  const auto ones = ones_of(m);
  for (int r = 0; r < m.n; ++r)
    for (int c = 0; c < m.n; ++c)
      if (!m.at(r, c) && !creates_312(m, pre, ones, r, c)) return false;
  return true;
}

BinaryMatrix local_search_312(BinaryMatrix m, Rng& rng) {
  const int n = m.n;
  std::vector<std::size_t> worst;
  for (;;) {
    auto per = count_312_per_cell(m);
    std::size_t best = *std::max_element(per.begin(), per.end());
    if (best == 0) break;
    worst.clear();
    for (std::size_t i = 0; i < per.size(); ++i)
      if (per[i] == best) worst.push_back(i);
    m.a[worst[uniform_index(rng, worst.size())]] = 0;
  }

  std::vector<std::size_t> zeros;
  for (std::size_t i = 0; i < m.a.size(); ++i)
    if (!m.a[i]) zeros.push_back(i);
  std::shuffle(zeros.begin(), zeros.end(), rng);
  Prefix pre(m);
  auto ones = ones_of(m);
  for (std::size_t i : zeros) {
    int r = static_cast<int>(i) / n, c = static_cast<int>(i) % n;
    if (creates_312(m, pre, ones, r, c)) continue;
    m.a[i] = 1;
    ones.push_back({r, c});
    pre = Prefix(m);
  }
  return m;
}

}  // namespace pb::problems
