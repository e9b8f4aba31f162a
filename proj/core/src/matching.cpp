#include "freqwm/matching.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_set>
#include <utility>

#include "freqwm/error.hpp"

namespace freqwm {
namespace {

// A directed view of an edge: (v, w) with the edge-array index carried along
// so slack and allowedge lookups stay O(1). id == -1 is the "no edge" state.
struct EdgeRef {
    std::int32_t v = -1;
    std::int32_t w = -1;
    std::int32_t id = -1;
};

// Primal-dual blossom solver. Vertices are 0..n-1 and double as their own
// trivial blossoms; non-trivial blossoms take ids n..2n-1 from a free list.
// Vertex duals are stored pre-multiplied by two so every quantity the
// algorithm touches (duals, slacks, deltas) stays an integer.
class BlossomSolver {
  public:
    BlossomSolver(std::int32_t n, const std::vector<MatchEdge>& input) : n_(n) {
        adj_.assign(static_cast<std::size_t>(n_), {});
        std::unordered_set<std::uint64_t> seen;
        seen.reserve(input.size() * 2);
        for (const MatchEdge& e : input) {
            if (e.u < 0 || e.u >= n_ || e.v < 0 || e.v >= n_) {
                throw Error("matching: edge endpoint out of range");
            }
            if (e.u == e.v) {
                throw Error("matching: self-loops are not allowed");
            }
            const std::uint64_t key =
                (static_cast<std::uint64_t>(std::min(e.u, e.v)) << 32) |
                static_cast<std::uint32_t>(std::max(e.u, e.v));
            if (!seen.insert(key).second) {
                throw Error("matching: parallel edges are not allowed");
            }
            const auto id = static_cast<std::int32_t>(eu_.size());
            eu_.push_back(e.u);
            ev_.push_back(e.v);
            ew_.push_back(e.weight);
            adj_[static_cast<std::size_t>(e.u)].push_back({e.u, e.v, id});
            adj_[static_cast<std::size_t>(e.v)].push_back({e.v, e.u, id});
            maxweight_ = std::max(maxweight_, e.weight);
        }

        const auto slots = static_cast<std::size_t>(n_) * 2;
        mate_v_.assign(static_cast<std::size_t>(n_), -1);
        mate_e_.assign(static_cast<std::size_t>(n_), -1);
        label_.assign(slots, 0);
        labeledge_.assign(slots, EdgeRef{});
        inblossom_.resize(static_cast<std::size_t>(n_));
        for (std::int32_t v = 0; v < n_; ++v) inblossom_[static_cast<std::size_t>(v)] = v;
        blossomparent_.assign(slots, -1);
        blossombase_.assign(slots, -1);
        for (std::int32_t v = 0; v < n_; ++v) blossombase_[static_cast<std::size_t>(v)] = v;
        bestedge_.assign(slots, EdgeRef{});
        dualvar_.assign(static_cast<std::size_t>(n_), maxweight_);
        blossomdual_.assign(slots, 0);
        blossom_used_.assign(slots, 0);
        childs_.assign(slots, {});
        bedges_.assign(slots, {});
        mybestedges_.assign(slots, {});
        has_mybestedges_.assign(slots, 0);
        bestedgeto_.assign(slots, EdgeRef{});
        for (std::int32_t b = 2 * n_ - 1; b >= n_; --b) unused_.push_back(b);
        allowedge_.assign(eu_.size(), 0);
    }

    void run() {
        if (n_ == 0 || eu_.empty()) return;
        while (true) {
            // A stage: search for an augmenting path, growing alternating
            // trees from every unmatched vertex, and use it to enlarge the
            // matching. Stop when no stage can augment.
            std::fill(label_.begin(), label_.end(), 0);
            std::fill(labeledge_.begin(), labeledge_.end(), EdgeRef{});
            std::fill(bestedge_.begin(), bestedge_.end(), EdgeRef{});
            for (std::int32_t b = n_; b < 2 * n_; ++b) {
                if (blossom_used_[static_cast<std::size_t>(b)]) {
                    mybestedges_[static_cast<std::size_t>(b)].clear();
                    has_mybestedges_[static_cast<std::size_t>(b)] = 0;
                }
            }
            std::fill(allowedge_.begin(), allowedge_.end(), 0);
            queue_.clear();
            for (std::int32_t v = 0; v < n_; ++v) {
                if (mate_v_[static_cast<std::size_t>(v)] == -1 &&
                    label_[static_cast<std::size_t>(inblossom_[static_cast<std::size_t>(v)])] == 0) {
                    assign_label(v, 1, EdgeRef{});
                }
            }

            bool augmented = false;
            while (true) {
                // A substage: extend the labeling until either an augmenting
                // path shows up or the duals must be adjusted.
                while (!queue_.empty() && !augmented) {
                    const std::int32_t v = queue_.back();
                    queue_.pop_back();
                    check(label_[static_cast<std::size_t>(inblossom_[static_cast<std::size_t>(v)])] == 1);
                    for (const EdgeRef& e : adj_[static_cast<std::size_t>(v)]) {
                        const std::int32_t w = e.w;
                        const std::int32_t bv = inblossom_[static_cast<std::size_t>(v)];
                        const std::int32_t bw = inblossom_[static_cast<std::size_t>(w)];
                        if (bv == bw) continue;  // edge internal to a blossom
                        std::int64_t kslack = 0;
                        if (!allowedge_[static_cast<std::size_t>(e.id)]) {
                            kslack = slack(e.id);
                            if (kslack <= 0) allowedge_[static_cast<std::size_t>(e.id)] = 1;
                        }
                        if (allowedge_[static_cast<std::size_t>(e.id)]) {
                            if (label_[static_cast<std::size_t>(bw)] == 0) {
                                // w is free: label it T, and its mate S.
                                assign_label(w, 2, e);
                            } else if (label_[static_cast<std::size_t>(bw)] == 1) {
                                // Two S-blossoms meet: either a new blossom
                                // or an augmenting path.
                                const std::int32_t base = scan_blossom(v, w);
                                if (base != -1) {
                                    add_blossom(base, e);
                                } else {
                                    augment_matching(e);
                                    augmented = true;
                                    break;
                                }
                            } else if (label_[static_cast<std::size_t>(w)] == 0) {
                                // w sits inside a T-blossom but has not been
                                // reached from outside yet; remember the way
                                // in for a later expansion.
                                check(label_[static_cast<std::size_t>(bw)] == 2);
                                label_[static_cast<std::size_t>(w)] = 2;
                                labeledge_[static_cast<std::size_t>(w)] = e;
                            }
                        } else if (label_[static_cast<std::size_t>(bw)] == 1) {
                            // Track the least-slack edge between S-blossoms.
                            if (bestedge_[static_cast<std::size_t>(bv)].id == -1 ||
                                kslack < slack(bestedge_[static_cast<std::size_t>(bv)].id)) {
                                bestedge_[static_cast<std::size_t>(bv)] = e;
                            }
                        } else if (label_[static_cast<std::size_t>(w)] == 0) {
                            // Track the least-slack edge reaching a free vertex.
                            if (bestedge_[static_cast<std::size_t>(w)].id == -1 ||
                                kslack < slack(bestedge_[static_cast<std::size_t>(w)].id)) {
                                bestedge_[static_cast<std::size_t>(w)] = e;
                            }
                        }
                    }
                }
                if (augmented) break;

                // No augmenting path under the current duals; compute the
                // largest safe dual adjustment. All quantities are doubled.
                int deltatype = 1;
                std::int64_t delta = *std::min_element(dualvar_.begin(), dualvar_.end());
                EdgeRef deltaedge{};
                std::int32_t deltablossom = -1;

                for (std::int32_t v = 0; v < n_; ++v) {
                    // Slack to a free vertex.
                    if (label_[static_cast<std::size_t>(inblossom_[static_cast<std::size_t>(v)])] == 0 &&
                        bestedge_[static_cast<std::size_t>(v)].id != -1) {
                        const std::int64_t d = slack(bestedge_[static_cast<std::size_t>(v)].id);
                        if (d < delta) {
                            delta = d;
                            deltatype = 2;
                            deltaedge = bestedge_[static_cast<std::size_t>(v)];
                        }
                    }
                }
                for (std::int32_t b = 0; b < 2 * n_; ++b) {
                    // Half the slack between two S-blossoms.
                    if (b >= n_ && !blossom_used_[static_cast<std::size_t>(b)]) continue;
                    if (blossomparent_[static_cast<std::size_t>(b)] == -1 &&
                        label_[static_cast<std::size_t>(b)] == 1 &&
                        bestedge_[static_cast<std::size_t>(b)].id != -1) {
                        const std::int64_t ks = slack(bestedge_[static_cast<std::size_t>(b)].id);
                        check(ks % 2 == 0);
                        const std::int64_t d = ks / 2;
                        if (d < delta) {
                            delta = d;
                            deltatype = 3;
                            deltaedge = bestedge_[static_cast<std::size_t>(b)];
                        }
                    }
                }
                for (std::int32_t b = n_; b < 2 * n_; ++b) {
                    // Dual of a T-blossom, which expansion would free.
                    if (blossom_used_[static_cast<std::size_t>(b)] &&
                        blossomparent_[static_cast<std::size_t>(b)] == -1 &&
                        label_[static_cast<std::size_t>(b)] == 2 &&
                        blossomdual_[static_cast<std::size_t>(b)] < delta) {
                        delta = blossomdual_[static_cast<std::size_t>(b)];
                        deltatype = 4;
                        deltablossom = b;
                    }
                }

                for (std::int32_t v = 0; v < n_; ++v) {
                    const std::int32_t lbl =
                        label_[static_cast<std::size_t>(inblossom_[static_cast<std::size_t>(v)])];
                    if (lbl == 1) {
                        dualvar_[static_cast<std::size_t>(v)] -= delta;
                    } else if (lbl == 2) {
                        dualvar_[static_cast<std::size_t>(v)] += delta;
                    }
                }
                for (std::int32_t b = n_; b < 2 * n_; ++b) {
                    if (blossom_used_[static_cast<std::size_t>(b)] &&
                        blossomparent_[static_cast<std::size_t>(b)] == -1) {
                        if (label_[static_cast<std::size_t>(b)] == 1) {
                            blossomdual_[static_cast<std::size_t>(b)] += delta;
                        } else if (label_[static_cast<std::size_t>(b)] == 2) {
                            blossomdual_[static_cast<std::size_t>(b)] -= delta;
                        }
                    }
                }

                if (deltatype == 1) {
                    break;  // optimum reached
                } else if (deltatype == 2 || deltatype == 3) {
                    allowedge_[static_cast<std::size_t>(deltaedge.id)] = 1;
                    check(label_[static_cast<std::size_t>(
                              inblossom_[static_cast<std::size_t>(deltaedge.v)])] == 1);
                    queue_.push_back(deltaedge.v);
                } else {
                    expand_blossom(deltablossom, false);
                }
            }

            for (std::int32_t v = 0; v < n_; ++v) {
                if (mate_v_[static_cast<std::size_t>(v)] != -1) {
                    check(mate_v_[static_cast<std::size_t>(mate_v_[static_cast<std::size_t>(v)])] == v);
                }
            }
            if (!augmented) break;

            // End of stage: expand S-blossoms whose dual dropped to zero.
            for (std::int32_t b = n_; b < 2 * n_; ++b) {
                if (blossom_used_[static_cast<std::size_t>(b)] &&
                    blossomparent_[static_cast<std::size_t>(b)] == -1 &&
                    label_[static_cast<std::size_t>(b)] == 1 &&
                    blossomdual_[static_cast<std::size_t>(b)] == 0) {
                    expand_blossom(b, true);
                }
            }
        }
        verify_optimum();
    }

    std::vector<std::int32_t> mates() const { return mate_v_; }

  private:
    static void check(bool ok) {
        if (!ok) throw std::logic_error("matching: internal invariant violated");
    }

    std::int64_t slack(std::int32_t k) const {
        return dualvar_[static_cast<std::size_t>(eu_[static_cast<std::size_t>(k)])] +
               dualvar_[static_cast<std::size_t>(ev_[static_cast<std::size_t>(k)])] -
               2 * ew_[static_cast<std::size_t>(k)];
    }

    // Python-style wraparound indexing over a blossom's child/edge rings.
    template <typename T>
    static const T& ring_at(const std::vector<T>& v, std::int64_t j) {
        const auto len = static_cast<std::int64_t>(v.size());
        return v[static_cast<std::size_t>(((j % len) + len) % len)];
    }

    static std::int64_t index_of(const std::vector<std::int32_t>& v, std::int32_t x) {
        const auto it = std::find(v.begin(), v.end(), x);
        check(it != v.end());
        return it - v.begin();
    }

    void leaves_of(std::int32_t b, std::vector<std::int32_t>& out) const {
        scratch_stack_.clear();
        scratch_stack_.push_back(b);
        while (!scratch_stack_.empty()) {
            const std::int32_t t = scratch_stack_.back();
            scratch_stack_.pop_back();
            if (t < n_) {
                out.push_back(t);
            } else {
                for (const std::int32_t c : childs_[static_cast<std::size_t>(t)]) {
                    scratch_stack_.push_back(c);
                }
            }
        }
    }

    // Label the top-level blossom containing w, reached through `from`
    // (from.id == -1 marks a tree root). Labeling a T-blossom immediately
    // labels its base's mate S.
    void assign_label(std::int32_t w, std::int32_t t, const EdgeRef& from) {
        const std::int32_t b = inblossom_[static_cast<std::size_t>(w)];
        check(label_[static_cast<std::size_t>(w)] == 0 && label_[static_cast<std::size_t>(b)] == 0);
        label_[static_cast<std::size_t>(w)] = label_[static_cast<std::size_t>(b)] = t;
        labeledge_[static_cast<std::size_t>(w)] = labeledge_[static_cast<std::size_t>(b)] = from;
        bestedge_[static_cast<std::size_t>(w)] = EdgeRef{};
        bestedge_[static_cast<std::size_t>(b)] = EdgeRef{};
        if (t == 1) {
            if (b >= n_) {
                std::vector<std::int32_t> ls;
                leaves_of(b, ls);
                queue_.insert(queue_.end(), ls.begin(), ls.end());
            } else {
                queue_.push_back(b);
            }
        } else if (t == 2) {
            const std::int32_t base = blossombase_[static_cast<std::size_t>(b)];
            const std::int32_t m = mate_v_[static_cast<std::size_t>(base)];
            check(m != -1);
            assign_label(m, 1, EdgeRef{base, m, mate_e_[static_cast<std::size_t>(base)]});
        }
    }

    // Trace back from the S-vertices v and w. Returns the base vertex of a
    // newly discovered blossom, or -1 if the paths reach distinct roots
    // (an augmenting path).
    std::int32_t scan_blossom(std::int32_t v, std::int32_t w) {
        scratch_path_.clear();
        std::int32_t base = -1;
        while (v != -1) {
            std::int32_t b = inblossom_[static_cast<std::size_t>(v)];
            if (label_[static_cast<std::size_t>(b)] & 4) {
                base = blossombase_[static_cast<std::size_t>(b)];
                break;
            }
            check(label_[static_cast<std::size_t>(b)] == 1);
            scratch_path_.push_back(b);
            label_[static_cast<std::size_t>(b)] = 5;  // breadcrumb
            if (labeledge_[static_cast<std::size_t>(b)].id == -1) {
                check(mate_v_[static_cast<std::size_t>(blossombase_[static_cast<std::size_t>(b)])] == -1);
                v = -1;
            } else {
                check(labeledge_[static_cast<std::size_t>(b)].v ==
                      mate_v_[static_cast<std::size_t>(blossombase_[static_cast<std::size_t>(b)])]);
                v = labeledge_[static_cast<std::size_t>(b)].v;
                b = inblossom_[static_cast<std::size_t>(v)];
                check(label_[static_cast<std::size_t>(b)] == 2);
                v = labeledge_[static_cast<std::size_t>(b)].v;
            }
            if (w != -1) std::swap(v, w);
        }
        for (const std::int32_t b : scratch_path_) label_[static_cast<std::size_t>(b)] = 1;
        return base;
    }

    // Build a new S-blossom with the given base, closed by edge k whose
    // endpoints both carry label S.
    void add_blossom(std::int32_t base, EdgeRef k) {
        std::int32_t v = k.v;
        std::int32_t w = k.w;
        const std::int32_t bb = inblossom_[static_cast<std::size_t>(base)];
        std::int32_t bv = inblossom_[static_cast<std::size_t>(v)];
        std::int32_t bw = inblossom_[static_cast<std::size_t>(w)];

        check(!unused_.empty());
        const std::int32_t b = unused_.back();
        unused_.pop_back();
        blossom_used_[static_cast<std::size_t>(b)] = 1;
        blossombase_[static_cast<std::size_t>(b)] = base;
        blossomparent_[static_cast<std::size_t>(b)] = -1;
        blossomparent_[static_cast<std::size_t>(bb)] = b;

        auto& path = childs_[static_cast<std::size_t>(b)];
        auto& edgs = bedges_[static_cast<std::size_t>(b)];
        path.clear();
        edgs.clear();
        edgs.push_back(k);
        while (bv != bb) {
            blossomparent_[static_cast<std::size_t>(bv)] = b;
            path.push_back(bv);
            const EdgeRef& le = labeledge_[static_cast<std::size_t>(bv)];
            edgs.push_back(le);
            check(label_[static_cast<std::size_t>(bv)] == 2 ||
                  (label_[static_cast<std::size_t>(bv)] == 1 &&
                   le.v == mate_v_[static_cast<std::size_t>(blossombase_[static_cast<std::size_t>(bv)])]));
            v = le.v;
            bv = inblossom_[static_cast<std::size_t>(v)];
        }
        path.push_back(bb);
        std::reverse(path.begin(), path.end());
        std::reverse(edgs.begin(), edgs.end());
        while (bw != bb) {
            blossomparent_[static_cast<std::size_t>(bw)] = b;
            path.push_back(bw);
            const EdgeRef& le = labeledge_[static_cast<std::size_t>(bw)];
            edgs.push_back(EdgeRef{le.w, le.v, le.id});
            check(label_[static_cast<std::size_t>(bw)] == 2 ||
                  (label_[static_cast<std::size_t>(bw)] == 1 &&
                   le.v == mate_v_[static_cast<std::size_t>(blossombase_[static_cast<std::size_t>(bw)])]));
            w = le.v;
            bw = inblossom_[static_cast<std::size_t>(w)];
        }

        check(label_[static_cast<std::size_t>(bb)] == 1);
        label_[static_cast<std::size_t>(b)] = 1;
        labeledge_[static_cast<std::size_t>(b)] = labeledge_[static_cast<std::size_t>(bb)];
        blossomdual_[static_cast<std::size_t>(b)] = 0;

        std::vector<std::int32_t> ls;
        leaves_of(b, ls);
        for (const std::int32_t x : ls) {
            if (label_[static_cast<std::size_t>(inblossom_[static_cast<std::size_t>(x)])] == 2) {
                // Former T-vertices become S-vertices; scan them.
                queue_.push_back(x);
            }
            inblossom_[static_cast<std::size_t>(x)] = b;
        }

        // Combine the children's least-slack edge lists into one list with
        // at most one (minimum-slack) edge per neighboring S-blossom.
        scratch_touched_.clear();
        std::vector<EdgeRef> nblist;
        for (const std::int32_t child : path) {
            nblist.clear();
            if (child >= n_) {
                if (has_mybestedges_[static_cast<std::size_t>(child)]) {
                    nblist = std::move(mybestedges_[static_cast<std::size_t>(child)]);
                    mybestedges_[static_cast<std::size_t>(child)].clear();
                    has_mybestedges_[static_cast<std::size_t>(child)] = 0;
                } else {
                    std::vector<std::int32_t> cl;
                    leaves_of(child, cl);
                    for (const std::int32_t x : cl) {
                        const auto& a = adj_[static_cast<std::size_t>(x)];
                        nblist.insert(nblist.end(), a.begin(), a.end());
                    }
                }
            } else {
                const auto& a = adj_[static_cast<std::size_t>(child)];
                nblist.insert(nblist.end(), a.begin(), a.end());
            }
            for (const EdgeRef& e : nblist) {
                std::int32_t i = e.v;
                std::int32_t j = e.w;
                if (inblossom_[static_cast<std::size_t>(j)] == b) std::swap(i, j);
                const std::int32_t bj = inblossom_[static_cast<std::size_t>(j)];
                if (bj != b && label_[static_cast<std::size_t>(bj)] == 1) {
                    EdgeRef& slot = bestedgeto_[static_cast<std::size_t>(bj)];
                    if (slot.id == -1) {
                        scratch_touched_.push_back(bj);
                        slot = e;
                    } else if (slack(e.id) < slack(slot.id)) {
                        slot = e;
                    }
                }
            }
            bestedge_[static_cast<std::size_t>(child)] = EdgeRef{};
        }
        auto& mine = mybestedges_[static_cast<std::size_t>(b)];
        mine.clear();
        for (const std::int32_t bj : scratch_touched_) {
            mine.push_back(bestedgeto_[static_cast<std::size_t>(bj)]);
            bestedgeto_[static_cast<std::size_t>(bj)] = EdgeRef{};
        }
        has_mybestedges_[static_cast<std::size_t>(b)] = 1;

        EdgeRef best{};
        std::int64_t best_slack = 0;
        for (const EdgeRef& e : mine) {
            const std::int64_t s = slack(e.id);
            if (best.id == -1 || s < best_slack) {
                best = e;
                best_slack = s;
            }
        }
        bestedge_[static_cast<std::size_t>(b)] = best;
    }

    // Dissolve blossom b into its children. During a stage (endstage=false)
    // this happens to a T-blossom whose dual hit zero, and its children must
    // be relabeled; at the end of a stage it just unwraps S-blossoms.
    void expand_blossom(std::int32_t b, bool endstage) {
        for (const std::int32_t s : childs_[static_cast<std::size_t>(b)]) {
            blossomparent_[static_cast<std::size_t>(s)] = -1;
            if (s >= n_) {
                if (endstage && blossomdual_[static_cast<std::size_t>(s)] == 0) {
                    expand_blossom(s, endstage);
                } else {
                    std::vector<std::int32_t> ls;
                    leaves_of(s, ls);
                    for (const std::int32_t x : ls) inblossom_[static_cast<std::size_t>(x)] = s;
                }
            } else {
                inblossom_[static_cast<std::size_t>(s)] = s;
            }
        }

        if (!endstage && label_[static_cast<std::size_t>(b)] == 2) {
            const auto& path = childs_[static_cast<std::size_t>(b)];
            const auto& edgs = bedges_[static_cast<std::size_t>(b)];
            const auto len = static_cast<std::int64_t>(path.size());
            const std::int32_t entrychild =
                inblossom_[static_cast<std::size_t>(labeledge_[static_cast<std::size_t>(b)].w)];
            std::int64_t j = index_of(path, entrychild);
            std::int64_t jstep;
            if (j & 1) {
                j -= len;  // odd index: walk forward, wrapping around
                jstep = 1;
            } else {
                jstep = -1;  // even index: walk backward
            }
            // Walk from the entry child towards the base, relabeling the
            // T/S alternation along the way.
            EdgeRef cur = labeledge_[static_cast<std::size_t>(b)];
            while (j != 0) {
                EdgeRef pq;
                if (jstep == 1) {
                    pq = ring_at(edgs, j);
                } else {
                    const EdgeRef& e = ring_at(edgs, j - 1);
                    pq = EdgeRef{e.w, e.v, e.id};
                }
                label_[static_cast<std::size_t>(cur.w)] = 0;
                label_[static_cast<std::size_t>(pq.w)] = 0;
                assign_label(cur.w, 2, cur);
                allowedge_[static_cast<std::size_t>(pq.id)] = 1;
                j += jstep;
                if (jstep == 1) {
                    cur = ring_at(edgs, j);
                } else {
                    const EdgeRef& e = ring_at(edgs, j - 1);
                    cur = EdgeRef{e.w, e.v, e.id};
                }
                allowedge_[static_cast<std::size_t>(cur.id)] = 1;
                j += jstep;
            }
            // Relabel the base child T without stepping through to its mate.
            const std::int32_t bw = ring_at(path, j);
            label_[static_cast<std::size_t>(cur.w)] = 2;
            label_[static_cast<std::size_t>(bw)] = 2;
            labeledge_[static_cast<std::size_t>(cur.w)] = cur;
            labeledge_[static_cast<std::size_t>(bw)] = cur;
            bestedge_[static_cast<std::size_t>(bw)] = EdgeRef{};
            // Continue to entrychild: any child holding a vertex reached
            // from outside becomes a T-blossom of its own.
            j += jstep;
            while (ring_at(path, j) != entrychild) {
                const std::int32_t bv = ring_at(path, j);
                if (label_[static_cast<std::size_t>(bv)] == 1) {
                    j += jstep;
                    continue;
                }
                std::int32_t vv = -1;
                if (bv >= n_) {
                    std::vector<std::int32_t> ls;
                    leaves_of(bv, ls);
                    for (const std::int32_t x : ls) {
                        if (label_[static_cast<std::size_t>(x)] != 0) {
                            vv = x;
                            break;
                        }
                    }
                } else {
                    vv = bv;
                }
                if (vv != -1 && label_[static_cast<std::size_t>(vv)] != 0) {
                    check(label_[static_cast<std::size_t>(vv)] == 2);
                    check(inblossom_[static_cast<std::size_t>(vv)] == bv);
                    label_[static_cast<std::size_t>(vv)] = 0;
                    label_[static_cast<std::size_t>(mate_v_[static_cast<std::size_t>(
                        blossombase_[static_cast<std::size_t>(bv)])])] = 0;
                    assign_label(vv, 2, labeledge_[static_cast<std::size_t>(vv)]);
                }
                j += jstep;
            }
        }

        label_[static_cast<std::size_t>(b)] = 0;
        labeledge_[static_cast<std::size_t>(b)] = EdgeRef{};
        bestedge_[static_cast<std::size_t>(b)] = EdgeRef{};
        blossomparent_[static_cast<std::size_t>(b)] = -1;
        blossombase_[static_cast<std::size_t>(b)] = -1;
        blossomdual_[static_cast<std::size_t>(b)] = 0;
        childs_[static_cast<std::size_t>(b)].clear();
        bedges_[static_cast<std::size_t>(b)].clear();
        mybestedges_[static_cast<std::size_t>(b)].clear();
        has_mybestedges_[static_cast<std::size_t>(b)] = 0;
        blossom_used_[static_cast<std::size_t>(b)] = 0;
        unused_.push_back(b);
    }

    // Swap matched/unmatched edges along the path inside blossom b from
    // vertex v down to the base, then rotate so v becomes the new base.
    void augment_blossom(std::int32_t b, std::int32_t v) {
        std::int32_t t = v;
        while (blossomparent_[static_cast<std::size_t>(t)] != b) {
            t = blossomparent_[static_cast<std::size_t>(t)];
        }
        if (t >= n_) augment_blossom(t, v);

        auto& path = childs_[static_cast<std::size_t>(b)];
        auto& edgs = bedges_[static_cast<std::size_t>(b)];
        const auto len = static_cast<std::int64_t>(path.size());
        const std::int64_t i = index_of(path, t);
        std::int64_t j = i;
        std::int64_t jstep;
        if (j & 1) {
            j -= len;
            jstep = 1;
        } else {
            jstep = -1;
        }
        while (j != 0) {
            j += jstep;
            std::int32_t tt = ring_at(path, j);
            std::int32_t w;
            std::int32_t x;
            std::int32_t eid;
            if (jstep == 1) {
                const EdgeRef& e = ring_at(edgs, j);
                w = e.v;
                x = e.w;
                eid = e.id;
            } else {
                const EdgeRef& e = ring_at(edgs, j - 1);
                x = e.v;
                w = e.w;
                eid = e.id;
            }
            if (tt >= n_) augment_blossom(tt, w);
            j += jstep;
            tt = ring_at(path, j);
            if (tt >= n_) augment_blossom(tt, x);
            mate_v_[static_cast<std::size_t>(w)] = x;
            mate_v_[static_cast<std::size_t>(x)] = w;
            mate_e_[static_cast<std::size_t>(w)] = eid;
            mate_e_[static_cast<std::size_t>(x)] = eid;
        }
        std::rotate(path.begin(), path.begin() + i, path.end());
        std::rotate(edgs.begin(), edgs.begin() + i, edgs.end());
        blossombase_[static_cast<std::size_t>(b)] = blossombase_[static_cast<std::size_t>(path[0])];
        check(blossombase_[static_cast<std::size_t>(b)] == v);
    }

    // Flip matched/unmatched edges along the augmenting path through edge k,
    // whose endpoints are S-vertices in trees rooted at distinct single
    // vertices.
    void augment_matching(const EdgeRef& k) {
        for (int dir = 0; dir < 2; ++dir) {
            std::int32_t s = dir == 0 ? k.v : k.w;
            std::int32_t j = dir == 0 ? k.w : k.v;
            std::int32_t eid = k.id;
            while (true) {
                const std::int32_t bs = inblossom_[static_cast<std::size_t>(s)];
                check(label_[static_cast<std::size_t>(bs)] == 1);
                const EdgeRef& le = labeledge_[static_cast<std::size_t>(bs)];
                const std::int32_t base_mate =
                    mate_v_[static_cast<std::size_t>(blossombase_[static_cast<std::size_t>(bs)])];
                check((le.id == -1 && base_mate == -1) || (le.id != -1 && le.v == base_mate));
                if (bs >= n_) augment_blossom(bs, s);
                mate_v_[static_cast<std::size_t>(s)] = j;
                mate_e_[static_cast<std::size_t>(s)] = eid;
                if (labeledge_[static_cast<std::size_t>(bs)].id == -1) break;  // reached a root
                const std::int32_t t = labeledge_[static_cast<std::size_t>(bs)].v;
                const std::int32_t bt = inblossom_[static_cast<std::size_t>(t)];
                check(label_[static_cast<std::size_t>(bt)] == 2);
                const EdgeRef& lt = labeledge_[static_cast<std::size_t>(bt)];
                s = lt.v;
                j = lt.w;
                eid = lt.id;
                check(blossombase_[static_cast<std::size_t>(bt)] == t);
                if (bt >= n_) augment_blossom(bt, j);
                mate_v_[static_cast<std::size_t>(j)] = s;
                mate_e_[static_cast<std::size_t>(j)] = eid;
            }
        }
    }

    // Complementary slackness: every edge has non-negative slack, matched
    // edges have zero slack, single vertices have zero dual, and blossoms
    // with positive dual are full. Together these certify optimality.
    void verify_optimum() const {
        check(n_ == 0 || *std::min_element(dualvar_.begin(), dualvar_.end()) >= 0);
        for (std::int32_t b = n_; b < 2 * n_; ++b) {
            if (blossom_used_[static_cast<std::size_t>(b)]) {
                check(blossomdual_[static_cast<std::size_t>(b)] >= 0);
            }
        }
        std::vector<std::int32_t> ui, vi;
        for (std::size_t k = 0; k < eu_.size(); ++k) {
            const std::int32_t u = eu_[k];
            const std::int32_t v = ev_[k];
            std::int64_t s = dualvar_[static_cast<std::size_t>(u)] +
                             dualvar_[static_cast<std::size_t>(v)] - 2 * ew_[k];
            ui.clear();
            vi.clear();
            for (std::int32_t t = u; t != -1; t = blossomparent_[static_cast<std::size_t>(t)]) {
                ui.push_back(t);
            }
            for (std::int32_t t = v; t != -1; t = blossomparent_[static_cast<std::size_t>(t)]) {
                vi.push_back(t);
            }
            std::reverse(ui.begin(), ui.end());
            std::reverse(vi.begin(), vi.end());
            for (std::size_t d = 0; d < std::min(ui.size(), vi.size()); ++d) {
                if (ui[d] != vi[d]) break;
                s += 2 * blossomdual_[static_cast<std::size_t>(ui[d])];
            }
            check(s >= 0);
            if (mate_v_[static_cast<std::size_t>(u)] == v ||
                mate_v_[static_cast<std::size_t>(v)] == u) {
                check(mate_v_[static_cast<std::size_t>(u)] == v &&
                      mate_v_[static_cast<std::size_t>(v)] == u);
                check(s == 0);
            }
        }
        for (std::int32_t v = 0; v < n_; ++v) {
            check(mate_v_[static_cast<std::size_t>(v)] != -1 ||
                  dualvar_[static_cast<std::size_t>(v)] == 0);
        }
        for (std::int32_t b = n_; b < 2 * n_; ++b) {
            if (!blossom_used_[static_cast<std::size_t>(b)] ||
                blossomdual_[static_cast<std::size_t>(b)] <= 0) {
                continue;
            }
            const auto& edgs = bedges_[static_cast<std::size_t>(b)];
            check(edgs.size() % 2 == 1);
            for (std::size_t d = 1; d < edgs.size(); d += 2) {
                check(mate_v_[static_cast<std::size_t>(edgs[d].v)] == edgs[d].w &&
                      mate_v_[static_cast<std::size_t>(edgs[d].w)] == edgs[d].v);
            }
        }
    }

    std::int32_t n_;
    std::vector<std::int32_t> eu_, ev_;
    std::vector<std::int64_t> ew_;
    std::vector<std::vector<EdgeRef>> adj_;
    std::int64_t maxweight_ = 0;

    std::vector<std::int32_t> mate_v_;  // partner vertex or -1
    std::vector<std::int32_t> mate_e_;  // matched edge id (parallel to mate_v_)
    std::vector<std::int32_t> label_;   // 0 free, 1 S, 2 T, 5 scan breadcrumb
    std::vector<EdgeRef> labeledge_;
    std::vector<std::int32_t> inblossom_;
    std::vector<std::int32_t> blossomparent_;
    std::vector<std::int32_t> blossombase_;
    std::vector<EdgeRef> bestedge_;
    std::vector<std::int64_t> dualvar_;      // 2*u(v)
    std::vector<std::int64_t> blossomdual_;  // z(b), for ids >= n_
    std::vector<char> blossom_used_;
    std::vector<std::vector<std::int32_t>> childs_;
    std::vector<std::vector<EdgeRef>> bedges_;
    std::vector<std::vector<EdgeRef>> mybestedges_;
    std::vector<char> has_mybestedges_;
    std::vector<EdgeRef> bestedgeto_;  // scratch for add_blossom, keyed by blossom
    std::vector<std::int32_t> unused_;
    std::vector<char> allowedge_;  // per edge id: known zero slack this stage
    std::vector<std::int32_t> queue_;
    std::vector<std::int32_t> scratch_path_;
    std::vector<std::int32_t> scratch_touched_;
    mutable std::vector<std::int32_t> scratch_stack_;
};

}  // namespace

std::vector<std::int32_t> max_weight_matching(std::int32_t vertex_count,
                                              const std::vector<MatchEdge>& edges) {
    if (vertex_count < 0) throw Error("matching: negative vertex count");
    BlossomSolver solver(vertex_count, edges);
    solver.run();
    return solver.mates();
}

}  // namespace freqwm
