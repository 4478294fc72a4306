#include "patternboost/problems/box_cover.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace pb::problems {

namespace {

void check_dimension(int d) {
  if (d < 1 || d > kMaxBoxDimension)
    throw std::invalid_argument("box dimension must be in [1, " + std::to_string(kMaxBoxDimension) + "]");
}

// Calls f(point index) for every point of the box.
template <class F>
void for_each_point(const Box& b, F&& f) {
  const int d = static_cast<int>(b.size());
  std::vector<int> digit(static_cast<std::size_t>(d), 0);
  std::vector<int> values[kMaxBoxDimension];
  for (int i = 0; i < d; ++i)
    for (int v = 0; v < 3; ++v)
      if (b[static_cast<std::size_t>(i)] >> v & 1U) values[i].push_back(v);
  for (int i = 0; i < d; ++i)
    if (values[i].empty()) return;
  for (;;) {
    std::size_t idx = 0;
    for (int i = d; i-- > 0;) idx = idx * 3 + static_cast<std::size_t>(values[i][static_cast<std::size_t>(digit[i])]);
    f(idx);
    int i = 0;
    while (i < d && ++digit[i] == static_cast<int>(values[i].size())) digit[i++] = 0;
    if (i == d) return;
  }
}

}  // namespace

bool is_proper(const Box& b) {
  for (auto f : b)
    if (f == 0 || f >= 7) return false;
  return true;
}

std::size_t box_points(int d) {
  std::size_t p = 1;
  for (int i = 0; i < d; ++i) p *= 3;
  return p;
}

BoxCover BoxCover::from_payload(int d, std::size_t max_boxes, const Payload& payload) {
  check_dimension(d);
  const auto du = static_cast<std::size_t>(d);
  if (payload.size() != max_boxes * du)
    throw ShapeError("box payload has " + std::to_string(payload.size()) + " digits, expected " +
                     std::to_string(max_boxes * du));
  BoxCover c{d, {}};
  for (std::size_t s = 0; s < max_boxes; ++s) {
    Box b(payload.begin() + static_cast<std::ptrdiff_t>(s * du), payload.begin() + static_cast<std::ptrdiff_t>((s + 1) * du));
    const auto zeros = std::count(b.begin(), b.end(), std::uint8_t{0});
    if (zeros == d) continue;
    if (zeros != 0) throw ShapeError("box slot " + std::to_string(s) + " has an empty factor");
    for (auto f : b)
      if (f > 7) throw ShapeError("box factor must be a 3-bit mask");
    c.boxes.push_back(std::move(b));
  }
  std::sort(c.boxes.begin(), c.boxes.end());
  return c;
}

Payload BoxCover::to_payload(std::size_t max_boxes) const {
  if (boxes.size() > max_boxes)
    throw ShapeError(std::to_string(boxes.size()) + " boxes exceed " + std::to_string(max_boxes) + " slots");
  auto sorted = boxes;
  std::sort(sorted.begin(), sorted.end());
  Payload p;
  p.reserve(max_boxes * static_cast<std::size_t>(d));
  for (const auto& b : sorted) p.insert(p.end(), b.begin(), b.end());
  p.resize(max_boxes * static_cast<std::size_t>(d), 0);
  return p;
}

std::vector<int> coverage(const BoxCover& c) {
  std::vector<int> cover(box_points(c.d), 0);
  for (const auto& b : c.boxes) {
    if (b.size() != static_cast<std::size_t>(c.d)) throw ShapeError("box has the wrong dimension");
    for_each_point(b, [&](std::size_t p) { ++cover[p]; });
  }
  return cover;
}

bool verify_double_cover(const BoxCover& c) {
  for (const auto& b : c.boxes)
    if (b.size() != static_cast<std::size_t>(c.d) || !is_proper(b)) return false;
  for (int v : coverage(c))
    if (v != 2) return false;
  return true;
}

Score score_box_cover(const BoxCover& c, BoxCoverWeights w) {
  for (const auto& b : c.boxes)
    if (!is_proper(b)) return kInvalidScore;
  Score over = 0, under = 0;
  for (int v : coverage(c)) {
    over += std::max(0, v - 2);
    under += std::max(0, 2 - v);
  }
  return -static_cast<Score>(c.boxes.size()) - w.over * over - w.under * under;
}

BoxCover local_search_box_cover(BoxCover c, Rng& rng) {
  std::erase_if(c.boxes, [](const Box& b) { return !is_proper(b); });
  auto cover = coverage(c);

  std::vector<std::size_t> worst;
  for (;;) {
    std::size_t best = 0;
    worst.clear();
    for (std::size_t i = 0; i < c.boxes.size(); ++i) {
      std::size_t over = 0;
      for_each_point(c.boxes[i], [&](std::size_t p) { over += cover[p] > 2; });
      if (over > best) {
        best = over;
        worst.clear();
      }
      if (over == best && over > 0) worst.push_back(i);
    }
    if (best == 0) break;
    const std::size_t victim = worst[uniform_index(rng, worst.size())];
    for_each_point(c.boxes[victim], [&](std::size_t p) { --cover[p]; });
    c.boxes.erase(c.boxes.begin() + static_cast<std::ptrdiff_t>(victim));
  }

  const int d = c.d;
  std::vector<std::pair<int, int>> growth;  // (coordinate, value)
  for (;;) {
    std::vector<std::size_t> holes;
    for (std::size_t p = 0; p < cover.size(); ++p)
      if (cover[p] < 2) holes.push_back(p);
    if (holes.empty()) break;

    std::size_t start = holes[uniform_index(rng, holes.size())];
    Box b(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i, start /= 3) b[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(1U << (start % 3));

    // Growing the box only enlarges each pending slab, so one pass is maximal.
    growth.clear();
    for (int i = 0; i < d; ++i)
      for (int v = 0; v < 3; ++v)
        if (!(b[static_cast<std::size_t>(i)] >> v & 1U)) growth.emplace_back(i, v);
    std::shuffle(growth.begin(), growth.end(), rng);
    for (auto [i, v] : growth) {
      auto& factor = b[static_cast<std::size_t>(i)];
      if (factor >> v & 1U) continue;
      const auto widened = static_cast<std::uint8_t>(factor | (1U << v));
      if (widened == 7) continue;
      Box slab = b;
      slab[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(1U << v);
      bool ok = true;
      for_each_point(slab, [&](std::size_t p) { ok = ok && cover[p] < 2; });
      if (ok) factor = widened;
    }
    for_each_point(b, [&](std::size_t p) { ++cover[p]; });
    c.boxes.push_back(std::move(b));
  }
  std::sort(c.boxes.begin(), c.boxes.end());
  return c;
}

}  // namespace pb::problems
