#include "fusionkit/models.h"

#include <algorithm>
#include <map>
#include <set>

namespace fusionkit {

namespace {

std::vector<std::string> Names(int n) {
  std::vector<std::string> out;
  for (int i = 0; i < n; ++i) out.push_back("e" + std::to_string(i));
  return out;
}

bool NextSizes(std::vector<int>& sizes, int lo, int hi) {
  for (size_t i = 0; i < sizes.size(); ++i) {
    if (++sizes[i] <= hi) return true;
    sizes[i] = lo;
  }
  return false;
}

}  // namespace

void ForEachStructure(const Signature& sig, int max_size,
                      const std::function<bool(const FiniteStructure&)>& visit,
                      int min_size) {
  std::vector<int> sizes(sig.sorts().size(), min_size);
  do {
    FiniteStructure base("M", sig);
    for (size_t i = 0; i < sizes.size(); ++i) base.SetUniverse(sig.sorts()[i], Names(sizes[i]));
    // Slots: one per relation entry (2 values) or function entry (|result|).
    struct Slot {
      bool rel;
      std::string symbol;
      size_t offset;
      int radix;
    };
    std::vector<Slot> slots;
    bool impossible = false;
    for (const auto& [n, _] : sig.relations()) {
      for (size_t c = 0; c < base.relation(n).table.size(); ++c) slots.push_back({true, n, c, 2});
    }
    for (const auto& [n, f] : sig.functions()) {
      int r = base.Size(f.result);
      for (size_t c = 0; c < base.function(n).table.size(); ++c) {
        if (r == 0) impossible = true;
        slots.push_back({false, n, c, r});
      }
    }
    if (impossible) continue;
    std::vector<int> digits(slots.size(), 0);
    std::map<std::string, std::vector<uint8_t>> rel_tables;
    std::map<std::string, std::vector<int>> fun_tables;
    for (const auto& [n, _] : sig.relations()) rel_tables[n] = base.relation(n).table;
    for (const auto& [n, _] : sig.functions()) fun_tables[n] = std::vector<int>(base.function(n).table.size(), 0);
    while (true) {
      FiniteStructure s = base;
      for (size_t i = 0; i < slots.size(); ++i) {
        if (slots[i].rel) {
          rel_tables[slots[i].symbol][slots[i].offset] = static_cast<uint8_t>(digits[i]);
        } else {
          fun_tables[slots[i].symbol][slots[i].offset] = digits[i];
        }
      }
      for (auto& [n, t] : rel_tables) s.SetRelationTable(n, t);
      for (auto& [n, t] : fun_tables) s.SetFunctionTable(n, t);
      if (!visit(s)) return;
      size_t k = 0;
      while (k < digits.size() && ++digits[k] == slots[k].radix) digits[k++] = 0;
      if (k == digits.size()) break;
    }
  } while (NextSizes(sizes, min_size, max_size));
}

std::string IsomorphismKey(const FiniteStructure& s) {
  const auto& sig = s.signature();
  size_t nsorts = sig.sorts().size();
  std::vector<std::vector<int>> perms(nsorts);
  for (size_t i = 0; i < nsorts; ++i) {
    perms[i].resize(s.Size(static_cast<int>(i)));
    for (size_t k = 0; k < perms[i].size(); ++k) perms[i][k] = static_cast<int>(k);
  }
  std::string best;
  bool first = true;
  while (true) {
    std::string key;
    for (size_t i = 0; i < nsorts; ++i) key += std::to_string(perms[i].size()) + ",";
    for (const auto& [n, args] : sig.relations()) {
      TupleSpace space(s, args);
      std::vector<uint8_t> image(space.Count(), 0);
      const auto& t = s.relation(n);
      for (size_t c = 0; c < space.Count(); ++c) {
        if (!t.table[c]) continue;
        auto tuple = space.Decode(c);
        for (size_t k = 0; k < tuple.size(); ++k) tuple[k] = perms[t.sorts[k]][tuple[k]];
        image[space.Encode(tuple)] = 1;
      }
      key += "|";
      for (auto b : image) key += b ? '1' : '0';
    }
    for (const auto& [n, f] : sig.functions()) {
      TupleSpace space(s, f.args);
      std::vector<int> image(space.Count(), 0);
      const auto& t = s.function(n);
      for (size_t c = 0; c < space.Count(); ++c) {
        auto tuple = space.Decode(c);
        for (size_t k = 0; k < tuple.size(); ++k) tuple[k] = perms[t.sorts[k]][tuple[k]];
        image[space.Encode(tuple)] = perms[t.result][t.table[c]];
      }
      key += "|";
      for (int v : image) key += std::to_string(v) + ",";
    }
    if (first || key < best) best = key;
    first = false;
    size_t i = 0;
    while (i < nsorts && !std::next_permutation(perms[i].begin(), perms[i].end())) ++i;
    if (i == nsorts) break;
  }
  return best;
}

FiniteStructure RandomStructure(const Signature& sig, const std::vector<int>& sizes,
                                std::mt19937& rng, double density) {
  FiniteStructure s("M", sig);
  for (size_t i = 0; i < sig.sorts().size(); ++i) s.SetUniverse(sig.sorts()[i], Names(sizes.at(i)));
  std::bernoulli_distribution coin(density);
  for (const auto& [n, _] : sig.relations()) {
    auto t = s.relation(n).table;
    for (auto& b : t) b = coin(rng) ? 1 : 0;
    s.SetRelationTable(n, t);
  }
  for (const auto& [n, f] : sig.functions()) {
    int r = s.Size(f.result);
    auto t = s.function(n).table;
    if (r == 0 && !t.empty()) throw Error("function into an empty sort");
    for (auto& v : t) v = std::uniform_int_distribution<int>(0, r - 1)(rng);
    s.SetFunctionTable(n, t);
  }
  return s;
}

std::vector<FiniteStructure> ModelsUpTo(const Signature& sig, const Formula& f, int max_size) {
  std::vector<FiniteStructure> out;
  std::set<std::string> seen;
  ForEachStructure(sig, max_size, [&](const FiniteStructure& s) {
    if (Evaluate(s, f) && seen.insert(IsomorphismKey(s)).second) out.push_back(s);
    return true;
  });
  return out;
}

}  // namespace fusionkit
