#include "fqlab/coset_table.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>

namespace fqlab::fp {

// ---------------------------------------------------------------------------
// CosetTable

CosetTable::CosetTable(std::size_t generator_count, std::vector<Coset> entries, std::vector<Word> subgroup_words)
    : generator_count_(generator_count), entries_(std::move(entries)), subgroup_words_(std::move(subgroup_words)) {
    if (generator_count_ == 0) throw std::invalid_argument("coset table needs at least one generator");
    if (entries_.empty() || entries_.size() % column_count() != 0)
        throw std::invalid_argument("coset table entries do not fill whole rows");
    const auto n = static_cast<Coset>(coset_count());
    for (Coset e : entries_)
        if (e < kUndefined || e >= n) throw std::invalid_argument("coset table entry out of range");
}

bool CosetTable::complete() const {
    return std::find(entries_.begin(), entries_.end(), kUndefined) == entries_.end();
}

std::optional<Coset> CosetTable::trace(Coset start, const Word& w) const {
    Coset c = start;
    for (const Letter& l : w) {
        c = at(c, l);
        if (c == kUndefined) return std::nullopt;
    }
    return c;
}

perm::Permutation CosetTable::generator_permutation(std::size_t gen) const {
    std::vector<perm::Point> images(coset_count());
    for (std::size_t c = 0; c < coset_count(); ++c) {
        const Coset d = at(static_cast<Coset>(c), 2 * gen);
        if (d == kUndefined) throw std::logic_error("generator_permutation on an incomplete table");
        images[c] = static_cast<perm::Point>(d);
    }
    return perm::Permutation::from_images(std::move(images));
}

perm::PermGroup CosetTable::image(std::size_t element_cap) const {
    std::vector<perm::Permutation> gens;
    for (std::size_t g = 0; g < generator_count_; ++g) gens.push_back(generator_permutation(g));
    return perm::PermGroup::close(coset_count(), std::move(gens), element_cap);
}

bool CosetTable::verify(const Presentation& pres) const {
    if (pres.generator_count() != generator_count_ || !complete()) return false;
    const auto n = static_cast<Coset>(coset_count());
    for (Coset c = 0; c < n; ++c)
        for (std::size_t col = 0; col < column_count(); ++col)
            if (at(at(c, col), inverse_column(col)) != c) return false;
    // Transitivity from coset 0.
    std::vector<bool> seen(coset_count(), false);
    std::vector<Coset> queue{0};
    seen[0] = true;
    for (std::size_t head = 0; head < queue.size(); ++head)
        for (std::size_t col = 0; col < column_count(); ++col) {
            const Coset d = at(queue[head], col);
            if (!seen[d]) {
                seen[d] = true;
                queue.push_back(d);
            }
        }
    if (queue.size() != coset_count()) return false;
    for (const Word& r : pres.relators())
        for (Coset c = 0; c < n; ++c)
            if (trace(c, r) != c) return false;
    for (const Word& w : subgroup_words_)
        if (trace(0, w) != 0) return false;
    return true;
}

std::string CosetTable::to_csv(const Presentation& pres) const {
    std::string csv = "coset";
    for (const auto& name : pres.generator_names()) csv += "," + name + "," + name + "^-1";
    csv += "\n";
    for (std::size_t c = 0; c < coset_count(); ++c) {
        csv += std::to_string(c);
        for (std::size_t col = 0; col < column_count(); ++col)
            csv += "," + std::to_string(at(static_cast<Coset>(c), col));
        csv += "\n";
    }
    return csv;
}

CosetTable standardize(const CosetTable& t, Coset base) {
    const std::size_t n = t.coset_count();
    const std::size_t cols = t.column_count();
    std::vector<Coset> number(n, kUndefined);
    std::vector<Coset> order{base};
    number[base] = 0;
    for (std::size_t i = 0; i < order.size(); ++i)
        for (std::size_t col = 0; col < cols; ++col) {
            const Coset d = t.at(order[i], col);
            if (d == kUndefined) throw std::invalid_argument("standardize needs a complete table");
            if (number[d] == kUndefined) {
                number[d] = static_cast<Coset>(order.size());
                order.push_back(d);
            }
        }
    if (order.size() != n) throw std::invalid_argument("standardize needs a transitive table");
    std::vector<Coset> entries(n * cols);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t col = 0; col < cols; ++col) entries[i * cols + col] = number[t.at(order[i], col)];
    return CosetTable(t.generator_count(), std::move(entries), t.subgroup_words());
}

SchreierTree schreier_tree(const CosetTable& t) {
    const std::size_t n = t.coset_count();
    const std::size_t gens = t.generator_count();
    SchreierTree tree;
    tree.parent.assign(n, kUndefined);
    tree.parent_column.assign(n, 0);
    tree.representative.assign(n, Word{});
    tree.tree_edge.assign(n * gens, false);
    std::vector<bool> seen(n, false);
    std::vector<Coset> order{0};
    seen[0] = true;
    for (std::size_t i = 0; i < order.size(); ++i) {
        const Coset c = order[i];
        for (std::size_t col = 0; col < t.column_count(); ++col) {
            const Coset d = t.at(c, col);
            if (d == kUndefined || seen[d]) continue;
            seen[d] = true;
            order.push_back(d);
            tree.parent[d] = c;
            tree.parent_column[d] = col;
            tree.representative[d] = tree.representative[c];
            tree.representative[d].push_back(Letter::from_column(col));
            const Letter l = Letter::from_column(col);
            // Record the edge in its positive orientation.
            const Coset source = l.inverse ? d : c;
            tree.tree_edge[static_cast<std::size_t>(source) * gens + l.gen] = true;
        }
    }
    return tree;
}

// ---------------------------------------------------------------------------
// HLT enumeration

namespace {

class HltEnumerator {
  public:
    HltEnumerator(const Presentation& pres, std::size_t max_live)
        : cols_(2 * pres.generator_count()), max_live_(max_live), max_allocated_(2 * max_live + 1024) {}

    bool new_coset(Coset& out) {
        if (live_ >= max_live_ || parent_.size() >= max_allocated_) return false;
        out = static_cast<Coset>(parent_.size());
        parent_.push_back(out);
        table_.resize(table_.size() + cols_, kUndefined);
        ++live_;
        return true;
    }

    Coset& entry(Coset c, std::size_t col) { return table_[static_cast<std::size_t>(c) * cols_ + col]; }
    bool live(Coset c) const { return parent_[c] == c; }

    bool define(Coset c, std::size_t col) {
        Coset d;
        if (!new_coset(d)) return false;
        entry(c, col) = d;
        entry(d, inverse_column(col)) = c;
        return true;
    }

    Coset rep(Coset c) {
        Coset root = c;
        while (parent_[root] != root) root = parent_[root];
        while (parent_[c] != root) {
            const Coset next = parent_[c];
            parent_[c] = root;
            c = next;
        }
        return root;
    }

    void merge(Coset a, Coset b, std::vector<Coset>& queue) {
        a = rep(a);
        b = rep(b);
        if (a == b) return;
        if (b < a) std::swap(a, b);
        parent_[b] = a;
        --live_;
        queue.push_back(b);
    }

    void coincidence(Coset a, Coset b) {
        std::vector<Coset> queue;
        merge(a, b, queue);
        for (std::size_t i = 0; i < queue.size(); ++i) {
            const Coset e = queue[i];
            for (std::size_t col = 0; col < cols_; ++col) {
                const Coset f = entry(e, col);
                if (f == kUndefined) continue;
                const std::size_t inv = inverse_column(col);
                if (entry(f, inv) == e) entry(f, inv) = kUndefined;
                const Coset e1 = rep(e);
                const Coset f1 = rep(f);
                if (entry(e1, col) != kUndefined) {
                    merge(f1, entry(e1, col), queue);
                } else if (entry(f1, inv) != kUndefined) {
                    merge(e1, entry(f1, inv), queue);
                } else {
                    entry(e1, col) = f1;
                    entry(f1, inv) = e1;
                }
            }
        }
    }

    /// Scans `w` from `c`, defining cosets to close gaps.  False on budget exhaustion.
    bool scan_and_fill(Coset c, const Word& w) {
        if (w.empty()) return true;
        const std::size_t len = w.size();
        Coset f = c;
        Coset b = c;
        std::size_t i = 0;
        std::size_t j = len;  // letters [j, len) consumed backwards
        for (;;) {
            while (i < j && entry(f, w[i].column()) != kUndefined) f = entry(f, w[i++].column());
            if (i == j) {
                if (f != b) coincidence(f, b);
                return true;
            }
            while (j > i && entry(b, inverse_column(w[j - 1].column())) != kUndefined)
                b = entry(b, inverse_column(w[--j].column()));
            if (j == i) {
                if (f != b) coincidence(f, b);
                return true;
            }
            if (j == i + 1) {
                entry(f, w[i].column()) = b;
                entry(b, inverse_column(w[i].column())) = f;
                return true;
            }
            if (!define(f, w[i].column())) return false;
        }
    }

    std::optional<CosetTable> run(const Presentation& pres, const std::vector<Word>& subgroup_words) {
        Coset first;
        if (!new_coset(first)) return std::nullopt;
        for (const Word& w : subgroup_words)
            if (!scan_and_fill(0, free_reduce(w))) return std::nullopt;
        for (Coset c = 0; static_cast<std::size_t>(c) < parent_.size(); ++c) {
            for (const Word& r : pres.relators()) {
                if (!live(c)) break;
                if (!scan_and_fill(c, r)) return std::nullopt;
            }
            if (!live(c)) continue;
            for (std::size_t col = 0; col < cols_; ++col)
                if (entry(c, col) == kUndefined && !define(c, col)) return std::nullopt;
        }
        // Compact live cosets.
        std::vector<Coset> number(parent_.size(), kUndefined);
        Coset next = 0;
        for (Coset c = 0; static_cast<std::size_t>(c) < parent_.size(); ++c)
            if (live(c)) number[c] = next++;
        std::vector<Coset> entries;
        entries.reserve(static_cast<std::size_t>(next) * cols_);
        for (Coset c = 0; static_cast<std::size_t>(c) < parent_.size(); ++c) {
            if (!live(c)) continue;
            for (std::size_t col = 0; col < cols_; ++col) entries.push_back(number[rep(entry(c, col))]);
        }
        return standardize(CosetTable(pres.generator_count(), std::move(entries), subgroup_words));
    }

  private:
    std::size_t cols_;
    std::size_t max_live_;
    std::size_t max_allocated_;
    std::size_t live_ = 0;
    std::vector<Coset> parent_;
    std::vector<Coset> table_;
};

} // namespace

std::optional<CosetTable> todd_coxeter(const Presentation& pres, const std::vector<Word>& subgroup_words,
                                       std::size_t max_cosets) {
    if (max_cosets == 0) throw std::invalid_argument("todd_coxeter: max_cosets must be positive");
    for (const Word& w : subgroup_words)
        for (const Letter& l : w)
            if (l.gen >= pres.generator_count()) throw std::invalid_argument("subgroup word uses unknown generator");
    HltEnumerator enumerator(pres, max_cosets);
    return enumerator.run(pres, subgroup_words);
}

std::uint64_t search_budget() {
    if (const char* env = std::getenv("FQLAB_BUDGET")) {
        char* end = nullptr;
        const unsigned long long value = std::strtoull(env, &end, 10);
        if (end != env && *end == '\0' && value > 0) return value;
    }
    return kDefaultSearchBudget;
}

// ---------------------------------------------------------------------------
// Backtracking over partial tables

namespace {

/// A relator occurrence: relator `rel` read cyclically from `offset`,
/// backwards when `reversed` (i.e. the inverse relator).
struct Rotation {
    std::uint32_t rel;
    std::uint32_t offset;
    bool reversed;
};

class PartialSearch {
  public:
    enum class Mode { all_subgroups, normal_subgroups };

    PartialSearch(const Presentation& pres, std::size_t max_index, Mode mode, std::uint64_t budget)
        : gens_(pres.generator_count()), cols_(2 * gens_), max_(max_index), mode_(mode), budget_(budget),
          table_(max_index * cols_, kUndefined), rotations_(cols_) {
        for (const Word& r : pres.relators()) add_relator(r);
        parent_.assign(max_index, kUndefined);
        parent_column_.assign(max_index, 0);
        representative_.assign(max_index, Word{});
        count_ = 1;
    }

    std::function<bool(const CosetTable&)> visit;
    std::vector<Word> nontrivial_words;
    std::uint64_t nodes = 0;
    bool exhausted = false;
    bool stopped = false;

    void run() {
        // The empty table is consistent; start the search from it.
        search();
    }

  private:
    Coset& entry(Coset c, std::size_t col) { return table_[static_cast<std::size_t>(c) * cols_ + col]; }
    Coset entry(Coset c, std::size_t col) const { return table_[static_cast<std::size_t>(c) * cols_ + col]; }

    Letter letter(const Rotation& r, std::size_t k) const {
        const Word& w = relators_[r.rel];
        const std::size_t len = w.size();
        if (!r.reversed) return w[(r.offset + k) % len];
        // Inverse relator read from `offset`: letters w[offset-1]^-1, w[offset-2]^-1, ...
        return w[(r.offset + len - 1 - (k % len)) % len].inverted();
    }

    void add_relator(const Word& r) {
        const auto id = static_cast<std::uint32_t>(relators_.size());
        relators_.push_back(r);
        for (std::uint32_t k = 0; k < r.size(); ++k) {
            rotations_[r[k].column()].push_back({id, k, false});
            // Reversed rotation starting at offset k+1 begins with r[k]^-1.
            rotations_[r[k].inverted().column()].push_back({id, (k + 1) % static_cast<std::uint32_t>(r.size()), true});
        }
    }

    void set(Coset c, std::size_t col, Coset d) {
        entry(c, col) = d;
        entry(d, inverse_column(col)) = c;
        trail_.push_back({c, col});
        pending_.push_back({c, col});
    }

    /// Scans one relator occurrence from `c`.  False on conflict.
    bool scan(Coset c, const Rotation& rot) {
        const std::size_t len = relators_[rot.rel].size();
        Coset f = c;
        std::size_t i = 0;
        while (i < len) {
            const Coset next = entry(f, letter(rot, i).column());
            if (next == kUndefined) break;
            f = next;
            ++i;
        }
        if (i == len) return f == c;
        Coset b = c;
        std::size_t j = len;
        while (j > i) {
            const Coset next = entry(b, inverse_column(letter(rot, j - 1).column()));
            if (next == kUndefined) break;
            b = next;
            --j;
        }
        if (j == i) return f == b;
        if (j == i + 1) {
            const std::size_t col = letter(rot, i).column();
            if (entry(b, inverse_column(col)) != kUndefined) return false;
            set(f, col, b);
        }
        return true;
    }

    bool propagate() {
        while (!pending_.empty()) {
            const auto [c, col] = pending_.back();
            pending_.pop_back();
            for (std::size_t k = 0; k < rotations_[col].size(); ++k)
                if (!scan(c, rotations_[col][k])) return false;
        }
        return true;
    }

    /// Scans a freshly added relator from every coset.
    bool scan_everywhere(std::uint32_t rel) {
        for (Coset c = 0; static_cast<std::size_t>(c) < count_; ++c)
            if (!scan(c, Rotation{rel, 0, false})) return false;
        return propagate();
    }

    bool rejected_by_words() const {
        for (const Word& w : nontrivial_words) {
            Coset c = 0;
            bool defined = true;
            for (const Letter& l : w) {
                c = entry(c, l.column());
                if (c == kUndefined) {
                    defined = false;
                    break;
                }
            }
            if (defined && c == 0) return true;
        }
        return false;
    }

    /// Sims' test: renumbering from any other base coset must not give a
    /// smaller table.  Only the prefix determined by defined entries is compared.
    bool canonical() const {
        std::vector<Coset> forward(count_);
        std::vector<Coset> backward(count_);
        for (Coset base = 1; static_cast<std::size_t>(base) < count_; ++base) {
            std::fill(forward.begin(), forward.end(), kUndefined);   // new number -> old coset
            std::fill(backward.begin(), backward.end(), kUndefined); // old coset -> new number
            forward[0] = base;
            backward[base] = 0;
            Coset next = 1;
            bool decided = false;
            for (Coset i = 0; static_cast<std::size_t>(i) < count_ && !decided; ++i) {
                const Coset old = forward[i];
                if (old == kUndefined) break;
                for (std::size_t col = 0; col < cols_; ++col) {
                    const Coset ours = entry(i, col);
                    const Coset target = entry(old, col);
                    if (ours == kUndefined || target == kUndefined) {
                        decided = true;
                        break;
                    }
                    Coset theirs = backward[target];
                    if (theirs == kUndefined) {
                        theirs = next++;
                        backward[target] = theirs;
                        forward[theirs] = target;
                    }
                    if (theirs < ours) return false;
                    if (theirs > ours) {
                        decided = true;
                        break;
                    }
                }
            }
        }
        return true;
    }

    Word schreier_word(Coset c, std::size_t col, Coset d) const {
        Word w = representative_[c];
        w.push_back(Letter::from_column(col));
        const Word tail = inverse(representative_[d]);
        w.insert(w.end(), tail.begin(), tail.end());
        return free_reduce(w);
    }

    void emit() {
        std::vector<Coset> entries(table_.begin(), table_.begin() + static_cast<std::ptrdiff_t>(count_ * cols_));
        CosetTable t(gens_, std::move(entries));
        if (!visit(t)) stopped = true;
    }

    void search() {
        if (stopped || exhausted) return;
        if (++nodes > budget_) {
            exhausted = true;
            return;
        }
        if (mode_ == Mode::all_subgroups && !canonical()) return;
        if (rejected_by_words()) return;

        // First undefined entry in row-major order.
        std::size_t position = 0;
        const std::size_t filled = count_ * cols_;
        while (position < filled && table_[position] != kUndefined) ++position;
        if (position == filled) {
            emit();
            return;
        }
        const auto c = static_cast<Coset>(position / cols_);
        const std::size_t col = position % cols_;
        const std::size_t inv = inverse_column(col);

        // Option 1: a new coset.
        if (count_ < max_) {
            const std::size_t trail_mark = trail_.size();
            const auto d = static_cast<Coset>(count_++);
            parent_[d] = c;
            parent_column_[d] = col;
            representative_[d] = representative_[c];
            representative_[d].push_back(Letter::from_column(col));
            set(c, col, d);
            if (propagate()) search();
            pending_.clear();
            undo(trail_mark);
            --count_;
            if (stopped || exhausted) return;
        }
        // Option 2: an existing coset.
        for (Coset d = 0; static_cast<std::size_t>(d) < count_; ++d) {
            if (entry(d, inv) != kUndefined) continue;
            const std::size_t trail_mark = trail_.size();
            const std::size_t relator_mark = relators_.size();
            std::vector<std::size_t> rotation_marks;
            set(c, col, d);
            bool ok = propagate();
            if (ok && mode_ == Mode::normal_subgroups) {
                rotation_marks.reserve(cols_);
                for (const auto& r : rotations_) rotation_marks.push_back(r.size());
                const Word w = schreier_word(c, col, d);
                if (!w.empty()) {
                    add_relator(w);
                    ok = scan_everywhere(static_cast<std::uint32_t>(relator_mark));
                }
            }
            if (ok) search();
            pending_.clear();
            undo(trail_mark);
            if (!rotation_marks.empty()) {
                relators_.resize(relator_mark);
                for (std::size_t k = 0; k < cols_; ++k) rotations_[k].resize(rotation_marks[k]);
            }
            if (stopped || exhausted) return;
        }
    }

    void undo(std::size_t mark) {
        while (trail_.size() > mark) {
            const auto [c, col] = trail_.back();
            trail_.pop_back();
            const Coset d = entry(c, col);
            entry(c, col) = kUndefined;
            entry(d, inverse_column(col)) = kUndefined;
        }
    }

    std::size_t gens_;
    std::size_t cols_;
    std::size_t max_;
    Mode mode_;
    std::uint64_t budget_;
    std::vector<Coset> table_;
    std::size_t count_ = 0;
    std::vector<Word> relators_;
    std::vector<std::vector<Rotation>> rotations_;
    std::vector<std::pair<Coset, std::size_t>> trail_;
    std::vector<std::pair<Coset, std::size_t>> pending_;
    std::vector<Coset> parent_;
    std::vector<std::size_t> parent_column_;
    std::vector<Word> representative_;
};

} // namespace

std::vector<CosetTable> low_index_subgroups(const Presentation& pres, std::size_t max_index,
                                            std::uint64_t node_budget) {
    if (max_index == 0) throw std::invalid_argument("low_index_subgroups: max_index must be positive");
    std::vector<CosetTable> found;
    PartialSearch search(pres, max_index, PartialSearch::Mode::all_subgroups, node_budget);
    search.visit = [&](const CosetTable& t) {
        found.push_back(t);
        return true;
    };
    search.run();
    if (search.exhausted)
        throw BudgetExceeded("low_index_subgroups: search budget of " + std::to_string(node_budget) +
                             " nodes exhausted");
    for (const auto& t : found)
        if (!t.verify(pres)) throw std::logic_error("low_index_subgroups produced an inconsistent table");
    return found;
}

NormalSearchStats search_normal_subgroups(const Presentation& pres, std::size_t max_index,
                                          const std::function<bool(const CosetTable&)>& visit,
                                          const NormalSearchOptions& options) {
    if (max_index == 0) throw std::invalid_argument("search_normal_subgroups: max_index must be positive");
    PartialSearch search(pres, max_index, PartialSearch::Mode::normal_subgroups, options.node_budget);
    search.nontrivial_words = options.nontrivial_words;
    search.visit = [&](const CosetTable& t) {
        if (!t.verify(pres) || !is_normal_table(t))
            throw std::logic_error("normal subgroup search produced a non-regular table");
        return visit(t);
    };
    search.run();
    return {search.nodes, !search.exhausted && !search.stopped};
}

bool is_normal_table(const CosetTable& t) {
    try {
        return t.image(t.coset_count()).order() == t.coset_count();
    } catch (const perm::GroupTooLarge&) {
        return false;
    }
}

bool is_normal_by_conjugation(const CosetTable& t) {
    const SchreierTree tree = schreier_tree(t);
    const std::size_t n = t.coset_count();
    for (std::size_t c = 0; c < n; ++c) {
        for (std::size_t g = 0; g < t.generator_count(); ++g) {
            const auto coset = static_cast<Coset>(c);
            if (tree.is_tree_edge(coset, g, t.generator_count())) continue;
            const Coset d = t.at(coset, 2 * g);
            Word s = tree.representative[c];
            s.push_back(Letter{static_cast<std::uint32_t>(g), false});
            const Word back = inverse(tree.representative[d]);
            s.insert(s.end(), back.begin(), back.end());
            for (std::size_t y = 0; y < t.generator_count(); ++y) {
                const Letter ly{static_cast<std::uint32_t>(y), false};
                Word conj{ly.inverted()};
                conj.insert(conj.end(), s.begin(), s.end());
                conj.push_back(ly);
                if (t.trace(0, conj) != 0) return false;
            }
        }
    }
    return true;
}

} // namespace fqlab::fp
