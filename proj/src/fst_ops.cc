// Copyright 2026 The streamitn Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "itn/fst_ops.h"

#include <algorithm>
#include <limits>
#include <memory>
#include <queue>
#include <set>
#include <unordered_map>

#include "itn/errors.h"

namespace itn {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void RequireSameTables(const SymbolTablePtr& a, const SymbolTablePtr& b,
                       const char* op) {
  if (!CompatibleSymbols(a, b)) {
    throw ConfigError(std::string(op) + ": symbol table mismatch");
  }
}

bool HasStates(const Fst& f) {
  return f.NumStates() > 0 && f.Start() != kNoState;
}

Fst EmptyFst(SymbolTablePtr isyms, SymbolTablePtr osyms) {
  Fst out(std::move(isyms), std::move(osyms));
  out.SetStart(out.AddState());
  return out;
}

// Copies every state of `src` into `dst`; returns the id offset.
StateId AppendStates(const Fst& src, Fst* dst) {
  const StateId offset = static_cast<StateId>(dst->NumStates());
  for (StateId s = 0; s < src.NumStates(); ++s) dst->AddState();
  for (StateId s = 0; s < src.NumStates(); ++s) {
    for (Arc arc : src.Arcs(s)) {
      arc.nextstate += offset;
      dst->AddArc(s + offset, arc);
    }
    if (src.IsFinal(s)) dst->SetFinal(s + offset, src.Final(s));
  }
  return offset;
}

// Kahn order over all states; empty if the machine has a cycle.
std::vector<StateId> TopologicalOrder(const Fst& f) {
  const size_t n = f.NumStates();
  std::vector<uint32_t> indegree(n, 0);
  for (StateId s = 0; s < n; ++s) {
    for (const Arc& arc : f.Arcs(s)) ++indegree[arc.nextstate];
  }
  std::vector<StateId> order;
  order.reserve(n);
  for (StateId s = 0; s < n; ++s) {
    if (indegree[s] == 0) order.push_back(s);
  }
  for (size_t i = 0; i < order.size(); ++i) {
    for (const Arc& arc : f.Arcs(order[i])) {
      if (--indegree[arc.nextstate] == 0) order.push_back(arc.nextstate);
    }
  }
  if (order.size() != n) order.clear();
  return order;
}

constexpr int32_t kFinalChoice = -1;
constexpr int32_t kNoChoice = -2;

// Best completion of every state: the minimal (cost, output string) pair
// under lexicographic tie-breaking, stored as a choice per state.
struct BestCompletions {
  std::vector<double> dist;
  std::vector<int32_t> choice;
};

// Walks the non-epsilon output labels of a completion that starts with
// `first` and then follows the best choices from `state`.
class CompletionCursor {
 public:
  CompletionCursor(const Fst& f, const BestCompletions& best, Label first,
                   StateId state)
      : f_(f), best_(best), pending_(first), state_(state) {}

  // kNoLabel at the end of the string.
  Label Next() {
    while (true) {
      if (pending_ != kEpsilon) {
        Label l = pending_;
        pending_ = kEpsilon;
        return l;
      }
      if (state_ == kNoState) return kNoLabel;
      int32_t c = best_.choice[state_];
      if (c < 0) {
        state_ = kNoState;
        return kNoLabel;
      }
      const Arc& arc = f_.Arcs(state_)[c];
      pending_ = arc.olabel;
      state_ = arc.nextstate;
    }
  }

 private:
  const Fst& f_;
  const BestCompletions& best_;
  Label pending_;
  StateId state_;
};

// Lexicographic comparison where a proper prefix sorts first. kNoLabel marks
// the end of a string and is the largest label value, so it is mapped below
// every real label.
int CompareCursors(CompletionCursor a, CompletionCursor b) {
  while (true) {
    Label x = a.Next();
    Label y = b.Next();
    if (x == y) {
      if (x == kNoLabel) return 0;
      continue;
    }
    if (x == kNoLabel) return -1;
    if (y == kNoLabel) return 1;
    return x < y ? -1 : 1;
  }
}

BestCompletions ComputeBestCompletions(const Fst& f,
                                       const std::vector<StateId>& order) {
  BestCompletions best;
  best.dist.assign(f.NumStates(), kInf);
  best.choice.assign(f.NumStates(), kNoChoice);
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const StateId q = *it;
    double& d = best.dist[q];
    int32_t& c = best.choice[q];
    if (f.IsFinal(q)) {
      d = f.Final(q);
      c = kFinalChoice;
    }
    auto arcs = f.Arcs(q);
    for (int32_t i = 0; i < static_cast<int32_t>(arcs.size()); ++i) {
      const Arc& arc = arcs[i];
      if (best.dist[arc.nextstate] == kInf) continue;
      double cand = static_cast<double>(arc.weight) + best.dist[arc.nextstate];
      bool better = cand < d;
      if (!better && cand == d) {
        CompletionCursor mine(f, best, arc.olabel, arc.nextstate);
        CompletionCursor cur = c == kFinalChoice
                                   ? CompletionCursor(f, best, kEpsilon,
                                                      kNoState)
                                   : CompletionCursor(f, best, arcs[c].olabel,
                                                      arcs[c].nextstate);
        better = CompareCursors(mine, cur) < 0;
      }
      if (better) {
        d = cand;
        c = i;
      }
    }
  }
  return best;
}

}  // namespace

Fst CompileLinear(std::span<const std::string> tokens, SymbolTablePtr syms) {
  Fst out(syms, syms);
  out.ReserveStates(tokens.size() + 1);
  StateId s = out.AddState();
  out.SetStart(s);
  for (const std::string& tok : tokens) {
    Label l = syms->FindOrUnknown(tok);
    StateId next = out.AddState();
    out.AddArc(s, Arc{l, l, 0, next});
    s = next;
  }
  out.SetFinal(s, 0);
  return out;
}

Fst Compose(const Fst& a, const Fst& b) {
  RequireSameTables(a.OutputSymbols(), b.InputSymbols(), "Compose");
  if (!HasStates(a) || !HasStates(b)) {
    return EmptyFst(a.InputSymbols(), b.OutputSymbols());
  }
  Fst sorted_b;
  const Fst* bp = &b;
  if (!b.InputSorted()) {
    sorted_b = b;
    sorted_b.SortArcsByInput();
    bp = &sorted_b;
  }
  const Fst& rhs = *bp;

  Fst out(a.InputSymbols(), b.OutputSymbols());
  struct Tuple {
    StateId s1, s2;
    uint8_t filter;
  };
  std::vector<Tuple> tuples;
  std::unordered_map<uint64_t, StateId> index;
  const uint64_t nb = rhs.NumStates();
  auto state_of = [&](StateId s1, StateId s2, uint8_t filter) -> StateId {
    uint64_t key = (static_cast<uint64_t>(s1) * nb + s2) * 3 + filter;
    auto [it, inserted] =
        index.try_emplace(key, static_cast<StateId>(tuples.size()));
    if (inserted) {
      tuples.push_back({s1, s2, filter});
      out.AddState();
    }
    return it->second;
  };
  auto eps_range = [&](StateId s2) {
    auto arcs = rhs.Arcs(s2);
    auto end = std::find_if(arcs.begin(), arcs.end(),
                            [](const Arc& x) { return x.ilabel != kEpsilon; });
    return std::span<const Arc>(arcs.begin(), end);
  };

  out.SetStart(state_of(a.Start(), rhs.Start(), 0));
  for (size_t i = 0; i < tuples.size(); ++i) {
    const Tuple t = tuples[i];
    const StateId id = static_cast<StateId>(i);
    if (a.IsFinal(t.s1) && rhs.IsFinal(t.s2)) {
      out.SetFinal(id, a.Final(t.s1) + rhs.Final(t.s2));
    }
    for (const Arc& x : a.Arcs(t.s1)) {
      if (x.olabel == kEpsilon) {
        // a moves alone.
        if (t.filter != 2) {
          out.AddArc(id, Arc{x.ilabel, kEpsilon, x.weight,
                             state_of(x.nextstate, t.s2, 1)});
        }
        // Both consume an epsilon together.
        if (t.filter == 0) {
          for (const Arc& y : eps_range(t.s2)) {
            out.AddArc(id, Arc{x.ilabel, y.olabel, x.weight + y.weight,
                               state_of(x.nextstate, y.nextstate, 0)});
          }
        }
        continue;
      }
      auto arcs = rhs.Arcs(t.s2);
      auto lo = std::lower_bound(
          arcs.begin(), arcs.end(), x.olabel,
          [](const Arc& y, Label l) { return y.ilabel < l; });
      for (auto it = lo; it != arcs.end() && it->ilabel == x.olabel; ++it) {
        out.AddArc(id, Arc{x.ilabel, it->olabel, x.weight + it->weight,
                           state_of(x.nextstate, it->nextstate, 0)});
      }
    }
    // b moves alone.
    if (t.filter != 1) {
      for (const Arc& y : eps_range(t.s2)) {
        out.AddArc(id, Arc{kEpsilon, y.olabel, y.weight,
                           state_of(t.s1, y.nextstate, 2)});
      }
    }
  }
  return Connect(out);
}

Fst Connect(const Fst& f) {
  if (!HasStates(f)) return EmptyFst(f.InputSymbols(), f.OutputSymbols());
  const size_t n = f.NumStates();
  std::vector<char> access(n, 0), coaccess(n, 0);
  std::vector<std::vector<StateId>> reverse(n);
  std::vector<StateId> stack{f.Start()};
  access[f.Start()] = 1;
  while (!stack.empty()) {
    StateId s = stack.back();
    stack.pop_back();
    for (const Arc& arc : f.Arcs(s)) {
      reverse[arc.nextstate].push_back(s);
      if (!access[arc.nextstate]) {
        access[arc.nextstate] = 1;
        stack.push_back(arc.nextstate);
      }
    }
  }
  for (StateId s = 0; s < n; ++s) {
    if (access[s] && f.IsFinal(s)) {
      coaccess[s] = 1;
      stack.push_back(s);
    }
  }
  while (!stack.empty()) {
    StateId s = stack.back();
    stack.pop_back();
    for (StateId p : reverse[s]) {
      if (!coaccess[p]) {
        coaccess[p] = 1;
        stack.push_back(p);
      }
    }
  }
  if (!coaccess[f.Start()]) {
    return EmptyFst(f.InputSymbols(), f.OutputSymbols());
  }
  std::vector<StateId> remap(n, kNoState);
  Fst out(f.InputSymbols(), f.OutputSymbols());
  for (StateId s = 0; s < n; ++s) {
    if (access[s] && coaccess[s]) remap[s] = out.AddState();
  }
  for (StateId s = 0; s < n; ++s) {
    if (remap[s] == kNoState) continue;
    for (Arc arc : f.Arcs(s)) {
      if (remap[arc.nextstate] == kNoState) continue;
      arc.nextstate = remap[arc.nextstate];
      out.AddArc(remap[s], arc);
    }
    if (f.IsFinal(s)) out.SetFinal(remap[s], f.Final(s));
  }
  out.SetStart(remap[f.Start()]);
  return out;
}

Fst Union(std::span<const Fst> fsts) {
  if (fsts.empty()) throw ConfigError("Union: no machines");
  for (const Fst& f : fsts) {
    RequireSameTables(f.InputSymbols(), fsts[0].InputSymbols(), "Union");
    RequireSameTables(f.OutputSymbols(), fsts[0].OutputSymbols(), "Union");
  }
  Fst out(fsts[0].InputSymbols(), fsts[0].OutputSymbols());
  StateId start = out.AddState();
  out.SetStart(start);
  for (const Fst& f : fsts) {
    if (!HasStates(f)) continue;
    StateId offset = AppendStates(f, &out);
    out.AddArc(start, Arc{kEpsilon, kEpsilon, 0, f.Start() + offset});
  }
  return out;
}

Fst Concat(const Fst& a, const Fst& b) {
  RequireSameTables(a.InputSymbols(), b.InputSymbols(), "Concat");
  RequireSameTables(a.OutputSymbols(), b.OutputSymbols(), "Concat");
  if (!HasStates(a) || !HasStates(b)) {
    return EmptyFst(a.InputSymbols(), a.OutputSymbols());
  }
  Fst out(a.InputSymbols(), a.OutputSymbols());
  AppendStates(a, &out);
  StateId offset = AppendStates(b, &out);
  for (StateId s = 0; s < a.NumStates(); ++s) {
    if (!a.IsFinal(s)) continue;
    out.AddArc(s, Arc{kEpsilon, kEpsilon, a.Final(s), b.Start() + offset});
    out.SetFinal(s, kZeroWeight);
  }
  out.SetStart(a.Start());
  return out;
}

Fst Closure(const Fst& f) {
  Fst out(f.InputSymbols(), f.OutputSymbols());
  StateId start = out.AddState();
  out.SetStart(start);
  out.SetFinal(start, 0);
  if (!HasStates(f)) return out;
  StateId offset = AppendStates(f, &out);
  const StateId inner = f.Start() + offset;
  out.AddArc(start, Arc{kEpsilon, kEpsilon, 0, inner});
  for (StateId s = 0; s < f.NumStates(); ++s) {
    if (f.IsFinal(s)) {
      out.AddArc(s + offset, Arc{kEpsilon, kEpsilon, f.Final(s), inner});
    }
  }
  return out;
}

Fst Invert(const Fst& f) {
  Fst swapped(f.OutputSymbols(), f.InputSymbols());
  for (StateId s = 0; s < f.NumStates(); ++s) swapped.AddState();
  for (StateId s = 0; s < f.NumStates(); ++s) {
    for (Arc arc : f.Arcs(s)) {
      std::swap(arc.ilabel, arc.olabel);
      swapped.AddArc(s, arc);
    }
    if (f.IsFinal(s)) swapped.SetFinal(s, f.Final(s));
  }
  swapped.SetStart(f.Start());
  return swapped;
}

bool IsAcyclic(const Fst& f) {
  return f.NumStates() == 0 || !TopologicalOrder(f).empty();
}

std::vector<Path> ShortestPaths(const Fst& input, int n) {
  if (n < 1) throw ConfigError("ShortestPaths: n must be positive");
  std::vector<Path> results;
  if (!HasStates(input)) return results;
  const Fst f = Connect(input);
  if (!f.IsFinal(f.Start()) && f.Arcs(f.Start()).empty()) return results;
  std::vector<StateId> order = TopologicalOrder(f);
  if (order.empty()) {
    throw ConfigError("ShortestPaths requires an acyclic machine");
  }
  const BestCompletions best = ComputeBestCompletions(f, order);

  // Best-first search over partial paths keyed by their best completion, so
  // complete paths come off the queue in (weight, output string) order.
  struct Node {
    double g;
    double key;
    StateId state;  // kNoState once the final weight has been taken
    std::vector<Label> prefix;
    std::vector<Label> key_seq;
    uint64_t serial;
  };
  auto greater = [](const Node* x, const Node* y) {
    if (x->key != y->key) return x->key > y->key;
    if (x->key_seq != y->key_seq) return x->key_seq > y->key_seq;
    return x->serial > y->serial;
  };
  std::vector<std::unique_ptr<Node>> pool;
  std::priority_queue<Node*, std::vector<Node*>, decltype(greater)> heap(
      greater);
  uint64_t serial = 0;
  auto push = [&](double g, StateId state, std::vector<Label> prefix) {
    auto node = std::make_unique<Node>();
    node->g = g;
    node->state = state;
    node->key_seq = prefix;
    if (state == kNoState) {
      node->key = g;
    } else {
      node->key = g + best.dist[state];
      CompletionCursor cursor(f, best, kEpsilon, state);
      for (Label l = cursor.Next(); l != kNoLabel; l = cursor.Next()) {
        node->key_seq.push_back(l);
      }
    }
    node->prefix = std::move(prefix);
    node->serial = serial++;
    heap.push(node.get());
    pool.push_back(std::move(node));
  };

  push(0.0, f.Start(), {});
  std::set<std::vector<Label>> seen;
  while (!heap.empty() && static_cast<int>(results.size()) < n) {
    Node* node = heap.top();
    heap.pop();
    if (node->state == kNoState) {
      if (seen.insert(node->prefix).second) {
        results.push_back(Path{node->prefix, node->g});
      }
      continue;
    }
    const StateId s = node->state;
    if (f.IsFinal(s)) push(node->g + f.Final(s), kNoState, node->prefix);
    for (const Arc& arc : f.Arcs(s)) {
      if (best.dist[arc.nextstate] == kInf) continue;
      std::vector<Label> prefix = node->prefix;
      if (arc.olabel != kEpsilon) prefix.push_back(arc.olabel);
      push(node->g + arc.weight, arc.nextstate, std::move(prefix));
    }
  }
  std::stable_sort(results.begin(), results.end(),
                   [](const Path& x, const Path& y) {
                     if (x.weight != y.weight) return x.weight < y.weight;
                     return x.olabels < y.olabels;
                   });
  return results;
}

std::vector<std::string> GlueSymbols(std::span<const Label> labels,
                                     const SymbolTable& syms) {
  std::vector<std::string> tokens;
  std::string current;
  for (Label l : labels) {
    if (l == kEpsilon) continue;
    const std::string& sym = syms.Symbol(l);
    if (sym == kSpaceSymbol) {
      if (!current.empty()) tokens.push_back(std::move(current));
      current.clear();
    } else {
      current += sym;
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

std::optional<std::vector<std::string>> TransduceSpan(
    std::span<const std::string> span, const Fst& f) {
  Fst lattice = Compose(CompileLinear(span, f.InputSymbols()), f);
  std::vector<Path> paths = ShortestPaths(lattice, 1);
  if (paths.empty()) return std::nullopt;
  return GlueSymbols(paths.front().olabels, *f.OutputSymbols());
}

}  // namespace itn
