#include "gmq/groupops.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>
#include <thread>
#include <unordered_map>

#include "gmq/gmform.hpp"

namespace gmq {

namespace {

struct Letter {
  GenRef ref;
  H1Matrix matrix;
};

// Generators followed (per generator) by their inverses when distinct.
// Identity letters and repeated matrices never reach a new element, so only
// the first letter for each distinct non-identity matrix is kept.
std::vector<Letter> letters_with_inverses(const std::vector<LabeledGenerator>& gens) {
  std::vector<Letter> out;
  auto keep = [&](GenRef ref, const H1Matrix& m) {
    if (m.is_identity()) return;
    for (const auto& l : out)
      if (l.matrix == m) return;
    out.push_back({ref, m});
  };
  for (std::size_t k = 0; k < gens.size(); ++k) {
    const H1Matrix& m = gens[k].matrix;
    keep(GenRef{static_cast<int>(k), false}, m);
    keep(GenRef{static_cast<int>(k), true}, m.inverse());
  }
  return out;
}

std::uint64_t mix(std::uint64_t h, std::uint64_t v) {
  h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h * 0xff51afd7ed558ccdULL;
}

int clamp_workers(int workers, std::size_t items) {
  if (workers < 1) workers = 1;
  if (static_cast<std::size_t>(workers) > items) workers = static_cast<int>(std::max<std::size_t>(items, 1));
  return workers;
}

// Runs fn(worker, begin, end) over contiguous slices of [0, items).
template <typename Fn>
void parallel_slices(int workers, std::size_t items, Fn fn) {
  workers = clamp_workers(workers, items);
  if (workers == 1) {
    fn(0, std::size_t{0}, items);
    return;
  }
  std::vector<std::thread> pool;
  std::size_t chunk = (items + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    std::size_t b = std::min(items, chunk * w), e = std::min(items, chunk * (w + 1));
    pool.emplace_back([&, w, b, e] { fn(w, b, e); });
  }
  for (auto& t : pool) t.join();
}

}  // namespace

// --- words -------------------------------------------------------------------

H1Matrix replay(Genus g, const std::vector<LabeledGenerator>& gens, const GenWord& word) {
  H1Matrix m = H1Matrix::identity(g);
  for (const GenRef& r : word) {
    if (r.index < 0 || static_cast<std::size_t>(r.index) >= gens.size()) {
      throw InvalidArgument("generator index out of range in certificate");
    }
    const H1Matrix& step = gens[r.index].matrix;
    m = m.compose(r.inverse ? step.inverse() : step);
  }
  return m;
}

std::string render_gen_word(const std::vector<LabeledGenerator>& gens, const GenWord& word) {
  if (word.empty()) return "id";
  std::string out;
  for (const GenRef& r : word) {
    if (!out.empty()) out += ' ';
    out += gens.at(r.index).label;
    if (r.inverse) out += "^{-1}";
  }
  return out;
}

std::optional<MCGWord> realise(Genus g, const std::vector<LabeledGenerator>& gens,
                               const GenWord& word) {
  MCGWord out(g);
  for (const GenRef& r : word) {
    const auto& real = gens.at(r.index).realisation;
    if (!real) return std::nullopt;
    out = out * (r.inverse ? real->inverse() : *real);
  }
  return out;
}

GenWord inverse_word(const std::vector<LabeledGenerator>& gens, const GenWord& word) {
  GenWord out;
  out.reserve(word.size());
  for (auto it = word.rbegin(); it != word.rend(); ++it) {
    const H1Matrix& m = gens.at(it->index).matrix;
    bool involution = m.compose(m).is_identity();
    out.push_back({it->index, involution ? it->inverse : !it->inverse});
  }
  return out;
}

// --- GroupTable --------------------------------------------------------------

GroupTable::GroupTable(Genus g, std::vector<LabeledGenerator> generators)
    : genus_(g), generators_(std::move(generators)) {
  for (const auto& gen : generators_) require_same_genus(g, gen.matrix.genus());
  slots_.assign(1024, 0);
}

std::uint64_t GroupTable::hash_columns(const std::uint64_t* columns) const noexcept {
  std::uint64_t h = 0x243f6a8885a308d3ULL;
  for (int j = 0; j < genus_.value(); ++j) h = mix(h, columns[j]);
  return h ^ (h >> 29);
}

void GroupTable::grow_slots() {
  std::vector<std::uint32_t> fresh(slots_.size() * 2, 0);
  const std::size_t mask = fresh.size() - 1;
  for (std::uint32_t s : slots_) {
    if (s == 0) continue;
    std::size_t pos = hash_columns(cols(s - 1)) & mask;
    while (fresh[pos] != 0) pos = (pos + 1) & mask;
    fresh[pos] = s;
  }
  slots_.swap(fresh);
}

std::pair<std::uint32_t, bool> GroupTable::insert(const std::uint64_t* columns) {
  if ((count_ + 1) * 2 > slots_.size()) grow_slots();
  const std::size_t g = static_cast<std::size_t>(genus_.value());
  const std::size_t mask = slots_.size() - 1;
  std::size_t pos = hash_columns(columns) & mask;
  while (slots_[pos] != 0) {
    std::uint32_t idx = slots_[pos] - 1;
    if (std::equal(columns, columns + g, cols(idx))) return {idx, false};
    pos = (pos + 1) & mask;
  }
  arena_.insert(arena_.end(), columns, columns + g);
  std::uint32_t idx = static_cast<std::uint32_t>(count_++);
  slots_[pos] = idx + 1;
  return {idx, true};
}

H1Matrix GroupTable::matrix(std::size_t index) const {
  if (index >= count_) throw InvalidArgument("element index out of range");
  const std::uint64_t* c = cols(index);
  return H1Matrix::from_columns(genus_, std::vector<std::uint64_t>(c, c + genus_.value()));
}

GenWord GroupTable::certificate(std::size_t index) const {
  GenWord word;
  if (parent_.empty()) return word;  // enumerated tables carry no certificates
  for (std::int64_t at = static_cast<std::int64_t>(index); parent_[at] >= 0; at = parent_[at]) {
    word.push_back(via_[at]);
  }
  return word;
}

GroupElementRecord GroupTable::record(std::size_t index) const {
  return {matrix(index), certificate(index)};
}

std::optional<std::size_t> GroupTable::find(const H1Matrix& m) const {
  require_same_genus(genus_, m.genus());
  const std::uint64_t* columns = m.columns().data();
  const std::size_t mask = slots_.size() - 1;
  std::size_t pos = hash_columns(columns) & mask;
  while (slots_[pos] != 0) {
    std::uint32_t idx = slots_[pos] - 1;
    if (std::equal(columns, columns + genus_.value(), cols(idx))) return idx;
    pos = (pos + 1) & mask;
  }
  return std::nullopt;
}

std::vector<std::vector<std::uint64_t>> GroupTable::sorted_keys() const {
  std::vector<std::vector<std::uint64_t>> out;
  out.reserve(count_);
  for (std::size_t i = 0; i < count_; ++i) {
    out.emplace_back(cols(i), cols(i) + genus_.value());
  }
  std::sort(out.begin(), out.end());
  return out;
}

// --- enumeration -------------------------------------------------------------

namespace {

struct Enumerator {
  int g;
  std::vector<std::uint64_t> q_one;    // q(v) = 1
  std::vector<std::uint64_t> q_three;  // q(v) = 3
  std::vector<std::uint64_t> columns;
  std::vector<std::uint64_t>* out;

  const std::vector<std::uint64_t>& candidates(int j) const {
    return j % 2 == 0 ? q_one : q_three;  // column j images x_{j+1}
  }

  void run(int j) {
    if (j == g) {
      if (rank_f2(columns) == g) out->insert(out->end(), columns.begin(), columns.end());
      return;
    }
    for (std::uint64_t v : candidates(j)) {
      bool orthogonal = true;
      for (int k = 0; k < j; ++k) {
        if (std::popcount(v & columns[k]) & 1) {
          orthogonal = false;
          break;
        }
      }
      if (!orthogonal) continue;
      columns[j] = v;
      run(j + 1);
    }
  }
};

}  // namespace

GroupTable enumerate_orthogonal(Genus genus, int workers) {
  const int g = genus.value();
  if (g > kEnumerationMaxGenus) {
    throw BudgetExceeded("enumeration of O_g(q) is limited to genus <= " +
                         std::to_string(kEnumerationMaxGenus));
  }
  Enumerator proto{g, {}, {}, std::vector<std::uint64_t>(g), nullptr};
  for (std::uint64_t v = 1; v < (std::uint64_t{1} << g); ++v) {
    int q = q_eval(H1Vector::from_bits(genus, v)).value();
    if (q == 1) proto.q_one.push_back(v);
    if (q == 3) proto.q_three.push_back(v);
  }

  // Partition on the first column; merge slices in order.
  const auto& first = proto.candidates(0);
  std::vector<std::vector<std::uint64_t>> parts(first.size());
  parallel_slices(workers, first.size(), [&](int, std::size_t b, std::size_t e) {
    for (std::size_t c = b; c < e; ++c) {
      Enumerator en = proto;
      en.out = &parts[c];
      en.columns[0] = first[c];
      en.run(1);
    }
  });

  GroupTable table(genus, {});
  for (const auto& part : parts) {
    for (std::size_t off = 0; off < part.size(); off += g) table.insert(part.data() + off);
  }
  table.complete_ = true;
  return table;
}

// --- closure -----------------------------------------------------------------

GroupTable subgroup_closure(Genus genus, std::vector<LabeledGenerator> gens, std::size_t cap,
                            int workers) {
  if (cap < 1) throw InvalidArgument("closure cap must be at least 1");
  GroupTable table(genus, std::move(gens));
  const std::vector<Letter> letters = letters_with_inverses(table.generators_);
  const std::size_t g = static_cast<std::size_t>(genus.value());

  H1Matrix id = H1Matrix::identity(genus);
  table.insert(id.columns().data());
  table.parent_.push_back(-1);
  table.via_.push_back({});
  table.depth_.push_back(0);

  // Frontier elements are expanded in fixed-size chunks; products of a chunk
  // are computed in parallel and merged in frontier order.
  constexpr std::size_t kChunk = std::size_t{1} << 14;
  const std::size_t width = letters.size() * g;
  std::vector<std::uint32_t> frontier{0};
  std::vector<std::uint64_t> products;
  while (!frontier.empty()) {
    std::vector<std::uint32_t> next;
    for (std::size_t base = 0; base < frontier.size(); base += kChunk) {
      const std::size_t n = std::min(kChunk, frontier.size() - base);
      products.assign(n * width, 0);
      parallel_slices(workers, n, [&](int, std::size_t b, std::size_t e) {
        for (std::size_t f = b; f < e; ++f) {
          const std::uint64_t* x = table.cols(frontier[base + f]);
          for (std::size_t l = 0; l < letters.size(); ++l) {
            std::uint64_t* dst = products.data() + f * width + l * g;
            for (std::size_t j = 0; j < g; ++j) dst[j] = letters[l].matrix.apply_bits(x[j]);
          }
        }
      });
      for (std::size_t f = 0; f < n; ++f) {
        const std::uint32_t from = frontier[base + f];
        for (std::size_t l = 0; l < letters.size(); ++l) {
          const std::uint64_t* cand = products.data() + f * width + l * g;
          if (table.count_ >= cap && !table.find(H1Matrix::from_columns(
                                          genus, std::vector<std::uint64_t>(cand, cand + g)))) {
            table.complete_ = false;
            return table;
          }
          auto [idx, inserted] = table.insert(cand);
          if (!inserted) continue;
          table.parent_.push_back(from);
          table.via_.push_back(letters[l].ref);
          table.depth_.push_back(table.depth_[from] + 1);
          table.diameter_ = std::max(table.diameter_, table.depth_.back());
          next.push_back(idx);
        }
      }
    }
    frontier.swap(next);
  }
  table.complete_ = true;
  return table;
}

// --- reduction generators ----------------------------------------------------

int transvection_generator_index(Genus g, int i) {
  if (i < 1 || i > g.value() - 2) throw InvalidArgument("D_i needs 1 <= i <= g-2");
  return i - 1;
}

int triple_generator_index(Genus g, int i) {
  if (i < 1 || i > g.value() - 3) throw InvalidArgument("E_i needs 1 <= i <= g-3");
  return (g.value() - 2) + (i - 1);
}

std::vector<LabeledGenerator> reduction_generators(Genus g) {
  std::vector<LabeledGenerator> out;
  for (int i = 1; i <= g.value() - 2; ++i) {
    out.push_back({"D_" + std::to_string(i),
                   transvection(H1Vector::from_indices(g, {i, i + 2})),
                   MCGWord(g, {twist_d(i)})});
  }
  for (int i = 1; i <= g.value() - 3; ++i) {
    H1Vector p = H1Vector::from_indices(g, {i, i + 1});
    H1Vector r = H1Vector::from_indices(g, {i + 2, i + 3});
    H1Matrix m = transvection(p).compose(transvection(r)).compose(transvection(p + r));
    out.push_back({"E_" + std::to_string(i), m,
                   MCGWord(g, {twist_a(i), twist_a(i + 2), twist_c(i)})});
  }
  return out;
}

std::vector<LabeledGenerator> extendable_generators(Genus g) {
  const int n = g.value();
  std::vector<MCGWord> words;
  for (int i = 1; i <= n - 1; ++i) words.push_back(MCGWord(g, {twist_a(i, 2)}));
  for (int i = 1; i <= n - 3; ++i) words.push_back(MCGWord(g, {twist_c(i, 2)}));
  for (int i = 1; i <= n - 2; ++i) words.push_back(MCGWord(g, {twist_d(i)}));
  for (int i = 1; i <= n - 3; ++i)
    words.push_back(MCGWord(g, {twist_a(i), twist_a(i + 2), twist_c(i)}));
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j)
      if (i != j) words.push_back(MCGWord(g, {y_homeo(i, j)}));
  std::vector<LabeledGenerator> out;
  for (auto& w : words) out.push_back({w.to_string(), induced_matrix(w), w});
  return out;
}

GenerationReport verify_generation(Genus g, std::size_t cap, int workers) {
  GenerationReport report;
  report.genus = g.value();
  GroupTable closure = subgroup_closure(g, reduction_generators(g), cap, workers);
  for (const auto& gen : closure.generators()) report.generator_labels.push_back(gen.label);
  report.closure_order = closure.order();
  report.closure_complete = closure.complete();
  report.diameter = closure.diameter();
  GroupTable all = enumerate_orthogonal(g, workers);
  report.enumeration_order = all.order();
  report.equal = closure.complete() && closure.sorted_keys() == all.sorted_keys();
  return report;
}

// --- factorization -----------------------------------------------------------

const char* to_string(FactorStatus s) {
  switch (s) {
    case FactorStatus::Found: return "found";
    case FactorStatus::NotMember: return "not-member";
    case FactorStatus::BudgetExhausted: return "budget-exhausted";
  }
  return "?";
}

namespace {

struct SearchSide {
  struct Node {
    std::int64_t parent;
    int letter;
    int depth;
  };
  std::unordered_map<H1Matrix, std::size_t, MatrixHash> index;
  std::vector<H1Matrix> matrices;
  std::vector<Node> nodes;
  std::vector<std::size_t> frontier;

  std::size_t add(const H1Matrix& m, Node n) {
    std::size_t id = matrices.size();
    index.emplace(m, id);
    matrices.push_back(m);
    nodes.push_back(n);
    return id;
  }
};

}  // namespace

Factorization factorize(const H1Matrix& m, const std::vector<LabeledGenerator>& gens,
                        std::size_t cap) {
  const Genus g = m.genus();
  for (const auto& gen : gens) require_same_genus(g, gen.matrix.genus());
  Factorization result;
  if (m.is_identity()) {
    result.status = FactorStatus::Found;
    return result;
  }
  const std::vector<Letter> letters = letters_with_inverses(gens);
  std::vector<H1Matrix> inverses;
  for (const auto& l : letters) inverses.push_back(l.matrix.inverse());

  // Forward nodes X carry words w with X = prod(w) (new letters on the left).
  // Backward nodes Y carry words u with m = prod(u) Y (new letters on the right).
  SearchSide fwd, bwd;
  fwd.frontier.push_back(fwd.add(H1Matrix::identity(g), {-1, -1, 0}));
  bwd.frontier.push_back(bwd.add(m, {-1, -1, 0}));

  auto forward_word = [&](std::size_t id) {
    GenWord w;
    for (std::int64_t at = static_cast<std::int64_t>(id); fwd.nodes[at].parent >= 0;
         at = fwd.nodes[at].parent) {
      w.push_back(letters[fwd.nodes[at].letter].ref);
    }
    return w;
  };
  auto backward_word = [&](std::size_t id) {
    GenWord u;
    for (std::int64_t at = static_cast<std::int64_t>(id); bwd.nodes[at].parent >= 0;
         at = bwd.nodes[at].parent) {
      u.push_back(letters[bwd.nodes[at].letter].ref);
    }
    std::reverse(u.begin(), u.end());
    return u;
  };

  while (!fwd.frontier.empty() && !bwd.frontier.empty()) {
    const bool forward = fwd.frontier.size() <= bwd.frontier.size();
    SearchSide& side = forward ? fwd : bwd;
    SearchSide& other = forward ? bwd : fwd;

    std::vector<std::size_t> next;
    int best_len = -1;
    std::size_t best_here = 0, best_there = 0;
    for (std::size_t id : side.frontier) {
      for (std::size_t l = 0; l < letters.size(); ++l) {
        H1Matrix cand = (forward ? letters[l].matrix : inverses[l]).compose(side.matrices[id]);
        if (side.index.count(cand)) continue;
        if (fwd.matrices.size() + bwd.matrices.size() >= cap) {
          result.status = FactorStatus::BudgetExhausted;
          result.states = fwd.matrices.size() + bwd.matrices.size();
          return result;
        }
        std::size_t nid = side.add(cand, {static_cast<std::int64_t>(id), static_cast<int>(l),
                                          side.nodes[id].depth + 1});
        next.push_back(nid);
        auto hit = other.index.find(cand);
        if (hit != other.index.end()) {
          int len = side.nodes[nid].depth + other.nodes[hit->second].depth;
          if (best_len < 0 || len < best_len) {
            best_len = len;
            best_here = nid;
            best_there = hit->second;
          }
        }
      }
    }
    side.frontier.swap(next);
    if (best_len >= 0) {
      std::size_t f = forward ? best_here : best_there;
      std::size_t b = forward ? best_there : best_here;
      GenWord word = backward_word(b);
      GenWord tail = forward_word(f);
      word.insert(word.end(), tail.begin(), tail.end());
      if (replay(g, gens, word) != m) {
        throw std::logic_error("factorize: certificate does not replay");
      }
      result.status = FactorStatus::Found;
      result.word = std::move(word);
      result.states = fwd.matrices.size() + bwd.matrices.size();
      return result;
    }
  }
  // One side exhausted its orbit without meeting the other.
  result.status = FactorStatus::NotMember;
  result.states = fwd.matrices.size() + bwd.matrices.size();
  return result;
}

// --- constructive reductions -------------------------------------------------

namespace {

// Tracks vectors through generator applications, working in the window of
// positions offset+1..g (offset even, so parities agree).
class Reducer {
 public:
  Reducer(Genus g, std::vector<std::uint64_t> vecs)
      : g_(g), gens_(reduction_generators(g)), vecs_(std::move(vecs)) {}

  const std::vector<LabeledGenerator>& gens() const { return gens_; }
  std::uint64_t vec(int k) const { return vecs_[k]; }
  void set_vec(int k, std::uint64_t v) { vecs_[k] = v; }

  // Composition order (last applied generator first).
  GenWord word() const { return GenWord(applied_.rbegin(), applied_.rend()); }

  void set_offset(int offset) { offset_ = offset; }
  int span() const { return g_.value() - offset_; }

  void d_move(int local) { apply(transvection_generator_index(g_, local + offset_)); }
  void e_move(int local) { apply(triple_generator_index(g_, local + offset_)); }

  bool bit(int k, int local) const { return (vecs_[k] >> (local + offset_ - 1)) & 1U; }
  int weight(int k, int parity) const {
    int n = 0;
    for (int p = (parity ? 1 : 2); p <= span(); p += 2) n += bit(k, p);
    return n;
  }
  int odd_weight(int k) const { return weight(k, 1); }
  int even_weight(int k) const { return weight(k, 0); }

  // Moves the parity class of vector k onto `targets` (local positions of
  // that parity) with transvections T_{x_p + x_{p+2}} only.
  void route(int k, int parity, const std::vector<int>& targets) {
    std::vector<int> pos;
    for (int p = (parity ? 1 : 2); p <= span(); p += 2) pos.push_back(p);
    std::vector<int> want(pos.size(), 0);
    for (int t : targets) want.at((t - pos.front()) / 2) = 1;
    auto cur = [&](std::size_t t) { return static_cast<int>(bit(k, pos[t])); };
    for (;;) {
      std::size_t first = 0;
      while (first < pos.size() && cur(first) == want[first]) ++first;
      if (first == pos.size()) return;
      if (cur(first) == 0) {
        std::size_t m = first + 1;
        while (m < pos.size() && cur(m) == 0) ++m;
        if (m == pos.size()) throw std::logic_error("route: weight mismatch");
        for (std::size_t t = m; t > first; --t) d_move(pos[t - 1]);
      } else {
        std::size_t r = first + 1;
        while (r < pos.size() && cur(r) == 1) ++r;
        if (r == pos.size()) throw std::logic_error("route: weight mismatch");
        d_move(pos[r - 1]);
      }
    }
  }

  std::vector<int> lowest(int parity, int count, const std::vector<int>& skip = {}) const {
    std::vector<int> out;
    for (int p = (parity ? 1 : 2); p <= span() && static_cast<int>(out.size()) < count; p += 2) {
      if (std::find(skip.begin(), skip.end(), p) == skip.end()) out.push_back(p);
    }
    if (static_cast<int>(out.size()) != count) throw std::logic_error("no room to route");
    return out;
  }
  std::vector<int> highest(int parity, int count, const std::vector<int>& skip = {}) const {
    std::vector<int> out;
    int top = span() % 2 == parity % 2 ? span() : span() - 1;
    for (int p = top; p >= 1 && static_cast<int>(out.size()) < count; p -= 2) {
      if (std::find(skip.begin(), skip.end(), p) == skip.end()) out.push_back(p);
    }
    if (static_cast<int>(out.size()) != count) throw std::logic_error("no room to route");
    std::reverse(out.begin(), out.end());
    return out;
  }

  // x_l + x_{l+2} + x_{l+4} + x_{l+6} -> x_l + x_{l+1}, with l = 1 (odd part)
  // or l = 2 (even part); the other parity is kept out of the window.
  void collapse_quadruple(int k, int parity) {
    const int lo = odd_weight(k), le = even_weight(k);
    if (parity == 1) {
      route(k, 1, lowest(1, lo));
      route(k, 0, highest(0, le, {2, 4, 6}));
      e_move(4);
      e_move(3);  // x1 + x6
      d_move(4);
      d_move(2);  // x1 + x2
    } else {
      route(k, 0, lowest(0, le));
      route(k, 1, lowest(1, lo, {3, 5, 7}));
      e_move(5);
      e_move(4);  // x2 + x7
      d_move(5);
      d_move(3);  // x2 + x3
    }
  }

  // q = 0: reduce to (x1+x2) + ... + (x_{2n-1}+x_{2n}), then shorten while
  // 2n < span. Returns the final n.
  int normalize_isotropic(int k) {
    for (;;) {
      int e = odd_weight(k) - even_weight(k);
      if (e >= 4) collapse_quadruple(k, 1);
      else if (e <= -4) collapse_quadruple(k, 0);
      else break;
    }
    int n = odd_weight(k);
    route(k, 1, lowest(1, n));
    route(k, 0, lowest(0, n));
    while (n >= 2 && 2 * n < span()) {
      e_move(2 * n - 2);  // (x_{2n-2} + x_{2n-1} + x_{2n}) -> x_{2n}
      d_move(2 * n - 2);  // x_{2n} -> x_{2n-2}
      --n;
    }
    return n;
  }

  // q = 2: reduce to x1 + x3.
  void normalize_q2(int k) {
    for (;;) {
      const int lo = odd_weight(k), le = even_weight(k);
      const int e = lo - le;
      if (e >= 6) {
        collapse_quadruple(k, 1);
      } else if (e <= -6) {
        collapse_quadruple(k, 0);
      } else if (e == -2) {
        // (x2 + x4) + ... -> (x1 + x3) + ...
        route(k, 0, lowest(0, le));
        route(k, 1, highest(1, lo, {1, 3}));
        e_move(1);
      } else if (e == 2 && le > 0) {
        // (x1 + x3) + (x4 + ...) -> x1 + ...
        route(k, 1, lowest(1, lo));
        route(k, 0, lowest(0, le, {2}));
        e_move(1);
      } else if (e == 2) {
        route(k, 1, {1, 3});
        return;
      } else {
        throw std::logic_error("normalize_q2 called on a vector with q != 2");
      }
    }
  }

 private:
  void apply(int index) {
    for (auto& v : vecs_) v = gens_[index].matrix.apply_bits(v);
    applied_.push_back({index, false});
  }

  Genus g_;
  std::vector<LabeledGenerator> gens_;
  std::vector<std::uint64_t> vecs_;
  GenWord applied_;
  int offset_ = 0;
};

GenWord concat(std::initializer_list<const GenWord*> parts) {
  GenWord out;
  for (const GenWord* p : parts) out.insert(out.end(), p->begin(), p->end());
  return out;
}

}  // namespace

VectorReduction reduce_q2_vector(const H1Vector& a) {
  if (q_eval(a) != Z4Value(2)) {
    throw InvalidArgument("reduce_q2_vector needs q(a) = 2, got q(" + a.to_string() +
                          ") = " + q_eval(a).to_string());
  }
  const Genus g = a.genus();
  Reducer r(g, {a.bits()});
  r.normalize_q2(0);

  VectorReduction out{a, H1Vector::from_indices(g, {1, 3}), r.word(), {}};
  const auto& gens = r.gens();
  H1Matrix w = replay(g, gens, out.word);
  if (w.apply(a) != out.end) throw std::logic_error("reduce_q2_vector: replay mismatch");

  // W T_a W^{-1} = T_{x1+x3} = D_1.
  GenWord d1{{transvection_generator_index(g, 1), false}};
  GenWord inv = inverse_word(gens, out.word);
  out.transvection_word = concat({&inv, &d1, &out.word});
  if (replay(g, gens, out.transvection_word) != transvection(a)) {
    throw std::logic_error("reduce_q2_vector: transvection word does not replay");
  }
  return out;
}

const char* to_string(PairBranch b) {
  return b == PairBranch::Generic ? "generic" : "full-support";
}

const char* to_string(PairSlot s) {
  switch (s) {
    case PairSlot::A: return "a";
    case PairSlot::B: return "b";
    case PairSlot::Sum: return "a+b";
  }
  return "?";
}

H1Matrix isotropic_triple(const H1Vector& a, const H1Vector& b) {
  return transvection(a).compose(transvection(b)).compose(transvection(a + b));
}

PairReduction reduce_isotropic_pair(const H1Vector& a, const H1Vector& b) {
  require_same_genus(a.genus(), b.genus());
  const Genus g = a.genus();
  if (a.is_zero() || b.is_zero() || a == b) {
    throw InvalidArgument("isotropic pair needs a, b and a+b nonzero");
  }
  if (q_eval(a) != Z4Value(0) || q_eval(b) != Z4Value(0) || q_eval(a + b) != Z4Value(0)) {
    throw InvalidArgument("isotropic pair needs q(a) = q(b) = q(a+b) = 0");
  }

  PairReduction out{.a = a, .b = b, .a_end = a, .b_end = b};
  Reducer r(g, {a.bits(), b.bits()});
  PairSlot slot0 = PairSlot::A, slot1 = PairSlot::B;

  const int n = r.normalize_isotropic(0);
  if (2 * n == g.value()) {
    // a is x1 + ... + xg, fixed by every generator; reduce b instead and take
    // the pair (b, a + b).
    if (r.normalize_isotropic(1) != 1) throw std::logic_error("b reduced to the full vector");
    std::uint64_t full = r.vec(0);
    r.set_vec(0, r.vec(1));
    r.set_vec(1, full ^ r.vec(1));
    slot0 = PairSlot::B;
    slot1 = PairSlot::Sum;
  } else {
    // a = x1 + x2; b avoids {x1, x2} up to replacing it with a + b.
    if (r.bit(1, 1)) {
      r.set_vec(1, r.vec(1) ^ r.vec(0));
      slot1 = PairSlot::Sum;
    }
    r.set_offset(2);
    r.normalize_isotropic(1);
    r.set_offset(0);
  }

  const auto& gens = r.gens();
  out.word = r.word();
  out.a_end = H1Vector::from_bits(g, r.vec(0));
  out.b_end = H1Vector::from_bits(g, r.vec(1));
  out.a_end_from = slot0;
  out.b_end_from = slot1;

  auto source = [&](PairSlot s) { return s == PairSlot::A ? a : s == PairSlot::B ? b : a + b; };
  H1Matrix w = replay(g, gens, out.word);
  if (w.apply(source(slot0)) != out.a_end || w.apply(source(slot1)) != out.b_end) {
    throw std::logic_error("reduce_isotropic_pair: replay mismatch");
  }

  const H1Vector x12 = H1Vector::from_indices(g, {1, 2});
  const H1Vector x34 = g.value() >= 4 ? H1Vector::from_indices(g, {3, 4}) : H1Vector::zero(g);
  if (out.a_end != x12) throw std::logic_error("reduce_isotropic_pair: a did not reach x1+x2");

  GenWord target;
  if (out.b_end == x34) {
    out.branch = PairBranch::Generic;
    target = {{triple_generator_index(g, 1), false}};
  } else {
    out.branch = PairBranch::FullSupport;
    H1Vector rest = H1Vector::all_ones(g) + x12;
    if (out.b_end != rest || g.value() % 2 != 0 || g.value() < 6) {
      throw std::logic_error("reduce_isotropic_pair: unexpected end state " +
                             out.b_end.to_string());
    }
    H1Vector tail = rest + x34;  // x5 + ... + xg
    H1Matrix lhs = isotropic_triple(x12, rest);
    H1Matrix rhs = gens[triple_generator_index(g, 1)].matrix.compose(isotropic_triple(x12, tail));
    out.identity_checked = true;
    out.identity_holds = lhs == rhs;
    if (!out.identity_holds) {
      throw std::logic_error("full-support factorization identity failed");
    }
    PairReduction inner = reduce_isotropic_pair(x12, tail);
    if (inner.branch != PairBranch::Generic) {
      throw std::logic_error("shortened full-support pair is not generic");
    }
    GenWord e1{{triple_generator_index(g, 1), false}};
    target = concat({&e1, &inner.triple_word});
  }

  // W (T_a T_b T_{a+b}) W^{-1} = target.
  GenWord inv = inverse_word(gens, out.word);
  out.triple_word = concat({&inv, &target, &out.word});
  if (replay(g, gens, out.triple_word) != isotropic_triple(a, b)) {
    throw std::logic_error("reduce_isotropic_pair: triple word does not replay");
  }
  return out;
}

}  // namespace gmq
