#include "swissfair/matching.hpp"

#include <algorithm>
#include <limits>
#include <set>
#include <string>

#include "swissfair/error.hpp"

namespace swissfair {

namespace {

// Primal-dual blossom solver. Vertex duals are stored doubled so that every
// quantity stays integral; edge k's slack is dual[u] + dual[v] - 2 w(k).
//
// Endpoints: edge k has endpoints 2k (= u) and 2k+1 (= v). mate[v] holds the
// remote endpoint of v's matched edge, labelend[b] the endpoint through which
// top-level blossom b obtained its label. Blossom ids n..2n-1 are non-trivial.
class BlossomSolver {
public:
    explicit BlossomSolver(const WeightedGraph& g)
        : n_(g.node_count), edges_(g.edges), nedge_(static_cast<int>(g.edges.size())) {}

    std::vector<int> solve() {
        init();
        for (int stage = 0; stage < n_; ++stage) {
            std::fill(label_.begin(), label_.end(), 0);
            std::fill(bestedge_.begin(), bestedge_.end(), -1);
            for (int b = n_; b < 2 * n_; ++b) {
                blossombestedges_[b].clear();
                has_bestedges_[b] = false;
            }
            std::fill(allowedge_.begin(), allowedge_.end(), false);
            queue_.clear();

            for (int v = 0; v < n_; ++v) {
                if (mate_[v] == -1 && label_[inblossom_[v]] == 0) assign_label(v, 1, -1);
            }

            bool augmented = false;
            for (;;) {
                while (!queue_.empty() && !augmented) {
                    int v = queue_.back();
                    queue_.pop_back();
                    for (int p : neighbend_[v]) {
                        int k = p / 2;
                        int w = endpoint_[p];
                        if (inblossom_[v] == inblossom_[w]) continue;
                        Weight kslack = 0;
                        if (!allowedge_[k]) {
                            kslack = slack(k);
                            if (kslack <= 0) allowedge_[k] = true;
                        }
                        if (allowedge_[k]) {
                            if (label_[inblossom_[w]] == 0) {
                                assign_label(w, 2, p ^ 1);
                            } else if (label_[inblossom_[w]] == 1) {
                                int base = scan_blossom(v, w);
                                if (base >= 0) {
                                    add_blossom(base, k);
                                } else {
                                    augment_matching(k);
                                    augmented = true;
                                    break;
                                }
                            } else if (label_[w] == 0) {
                                label_[w] = 2;
                                labelend_[w] = p ^ 1;
                            }
                        } else if (label_[inblossom_[w]] == 1) {
                            int b = inblossom_[v];
                            if (bestedge_[b] == -1 || kslack < slack(bestedge_[b])) bestedge_[b] = k;
                        } else if (label_[w] == 0) {
                            if (bestedge_[w] == -1 || kslack < slack(bestedge_[w])) bestedge_[w] = k;
                        }
                    }
                }
                if (augmented) break;

                // Dual adjustment. Type 1: stop (a vertex dual hits zero);
                // 2: S-to-free edge becomes tight; 3: S-to-S edge tight;
                // 4: a T-blossom dual hits zero and must be expanded.
                int deltatype = 1;
                Weight delta = *std::min_element(dualvar_.begin(), dualvar_.begin() + n_);
                int deltaedge = -1;
                int deltablossom = -1;

                for (int v = 0; v < n_; ++v) {
                    if (label_[inblossom_[v]] == 0 && bestedge_[v] != -1) {
                        Weight d = slack(bestedge_[v]);
                        if (d < delta) {
                            delta = d;
                            deltatype = 2;
                            deltaedge = bestedge_[v];
                        }
                    }
                }
                for (int b = 0; b < 2 * n_; ++b) {
                    if (blossomparent_[b] == -1 && label_[b] == 1 && bestedge_[b] != -1) {
                        Weight d = slack(bestedge_[b]) / 2;
                        if (d < delta) {
                            delta = d;
                            deltatype = 3;
                            deltaedge = bestedge_[b];
                        }
                    }
                }
                for (int b = n_; b < 2 * n_; ++b) {
                    if (blossombase_[b] >= 0 && blossomparent_[b] == -1 && label_[b] == 2 &&
                        dualvar_[b] < delta) {
                        delta = dualvar_[b];
                        deltatype = 4;
                        deltablossom = b;
                    }
                }

                for (int v = 0; v < n_; ++v) {
                    if (label_[inblossom_[v]] == 1) {
                        dualvar_[v] -= delta;
                    } else if (label_[inblossom_[v]] == 2) {
                        dualvar_[v] += delta;
                    }
                }
                for (int b = n_; b < 2 * n_; ++b) {
                    if (blossombase_[b] >= 0 && blossomparent_[b] == -1) {
                        if (label_[b] == 1) {
                            dualvar_[b] += delta;
                        } else if (label_[b] == 2) {
                            dualvar_[b] -= delta;
                        }
                    }
                }

                if (deltatype == 1) {
                    break;
                } else if (deltatype == 2) {
                    allowedge_[deltaedge] = true;
                    int i = edges_[deltaedge].u;
                    int j = edges_[deltaedge].v;
                    if (label_[inblossom_[i]] == 0) std::swap(i, j);
                    queue_.push_back(i);
                } else if (deltatype == 3) {
                    allowedge_[deltaedge] = true;
                    queue_.push_back(edges_[deltaedge].u);
                } else {
                    expand_blossom(deltablossom, false);
                }
            }

            if (!augmented) break;

            // End of stage: expand S-blossoms whose dual dropped to zero.
            for (int b = n_; b < 2 * n_; ++b) {
                if (blossomparent_[b] == -1 && blossombase_[b] >= 0 && label_[b] == 1 &&
                    dualvar_[b] == 0) {
                    expand_blossom(b, true);
                }
            }
        }

        std::vector<int> mate_vertex(n_, -1);
        for (int v = 0; v < n_; ++v) {
            if (mate_[v] >= 0) mate_vertex[v] = endpoint_[mate_[v]];
        }
        return mate_vertex;
    }

private:
    void init() {
        Weight maxweight = 0;
        for (const auto& e : edges_) maxweight = std::max(maxweight, e.weight);

        endpoint_.resize(2 * nedge_);
        neighbend_.assign(n_, {});
        for (int k = 0; k < nedge_; ++k) {
            endpoint_[2 * k] = edges_[k].u;
            endpoint_[2 * k + 1] = edges_[k].v;
            neighbend_[edges_[k].u].push_back(2 * k + 1);
            neighbend_[edges_[k].v].push_back(2 * k);
        }

        mate_.assign(n_, -1);
        label_.assign(2 * n_, 0);
        labelend_.assign(2 * n_, -1);
        inblossom_.resize(n_);
        for (int v = 0; v < n_; ++v) inblossom_[v] = v;
        blossomparent_.assign(2 * n_, -1);
        blossomchilds_.assign(2 * n_, {});
        blossombase_.assign(2 * n_, -1);
        for (int v = 0; v < n_; ++v) blossombase_[v] = v;
        blossomendps_.assign(2 * n_, {});
        bestedge_.assign(2 * n_, -1);
        blossombestedges_.assign(2 * n_, {});
        has_bestedges_.assign(2 * n_, false);
        unusedblossoms_.clear();
        for (int b = n_; b < 2 * n_; ++b) unusedblossoms_.push_back(b);
        dualvar_.assign(2 * n_, 0);
        for (int v = 0; v < n_; ++v) dualvar_[v] = maxweight;
        allowedge_.assign(nedge_, false);
        queue_.clear();
    }

    Weight slack(int k) const {
        const auto& e = edges_[k];
        return dualvar_[e.u] + dualvar_[e.v] - 2 * e.weight;
    }

    void blossom_leaves(int b, std::vector<int>& out) const {
        if (b < n_) {
            out.push_back(b);
            return;
        }
        for (int t : blossomchilds_[b]) blossom_leaves(t, out);
    }

    std::vector<int> leaves(int b) const {
        std::vector<int> out;
        blossom_leaves(b, out);
        return out;
    }

    void assign_label(int w, int t, int p) {
        int b = inblossom_[w];
        label_[w] = label_[b] = t;
        labelend_[w] = labelend_[b] = p;
        bestedge_[w] = bestedge_[b] = -1;
        if (t == 1) {
            blossom_leaves(b, queue_);
        } else if (t == 2) {
            int base = blossombase_[b];
            assign_label(endpoint_[mate_[base]], 1, mate_[base] ^ 1);
        }
    }

    // Trace back from v and w to find either a new blossom's base or an
    // augmenting path (returns -1).
    int scan_blossom(int v, int w) {
        std::vector<int> path;
        int base = -1;
        while (v != -1 || w != -1) {
            int b = inblossom_[v];
            if (label_[b] & 4) {
                base = blossombase_[b];
                break;
            }
            path.push_back(b);
            label_[b] = 5;
            if (labelend_[b] == -1) {
                v = -1;
            } else {
                v = endpoint_[labelend_[b]];
                b = inblossom_[v];
                v = endpoint_[labelend_[b]];
            }
            if (w != -1) std::swap(v, w);
        }
        for (int b : path) label_[b] = 1;
        return base;
    }

    void add_blossom(int base, int k) {
        int v = edges_[k].u;
        int w = edges_[k].v;
        int bb = inblossom_[base];
        int bv = inblossom_[v];
        int bw = inblossom_[w];
        int b = unusedblossoms_.back();
        unusedblossoms_.pop_back();
        blossombase_[b] = base;
        blossomparent_[b] = -1;
        blossomparent_[bb] = b;

        auto& path = blossomchilds_[b];
        auto& endps = blossomendps_[b];
        path.clear();
        endps.clear();
        while (bv != bb) {
            blossomparent_[bv] = b;
            path.push_back(bv);
            endps.push_back(labelend_[bv]);
            v = endpoint_[labelend_[bv]];
            bv = inblossom_[v];
        }
        path.push_back(bb);
        std::reverse(path.begin(), path.end());
        std::reverse(endps.begin(), endps.end());
        endps.push_back(2 * k);
        while (bw != bb) {
            blossomparent_[bw] = b;
            path.push_back(bw);
            endps.push_back(labelend_[bw] ^ 1);
            w = endpoint_[labelend_[bw]];
            bw = inblossom_[w];
        }

        label_[b] = 1;
        labelend_[b] = labelend_[bb];
        dualvar_[b] = 0;
        for (int leaf : leaves(b)) {
            if (label_[inblossom_[leaf]] == 2) queue_.push_back(leaf);
            inblossom_[leaf] = b;
        }

        // Least-slack edges from the new blossom to each neighbouring S-blossom.
        std::vector<int> bestedgeto(2 * n_, -1);
        for (int child : path) {
            auto consider = [&](int edge) {
                int i = edges_[edge].u;
                int j = edges_[edge].v;
                if (inblossom_[j] == b) std::swap(i, j);
                int bj = inblossom_[j];
                if (bj != b && label_[bj] == 1 &&
                    (bestedgeto[bj] == -1 || slack(edge) < slack(bestedgeto[bj]))) {
                    bestedgeto[bj] = edge;
                }
            };
            if (!has_bestedges_[child]) {
                for (int leaf : leaves(child)) {
                    for (int p : neighbend_[leaf]) consider(p / 2);
                }
            } else {
                for (int edge : blossombestedges_[child]) consider(edge);
            }
            blossombestedges_[child].clear();
            has_bestedges_[child] = false;
            bestedge_[child] = -1;
        }
        auto& best = blossombestedges_[b];
        best.clear();
        for (int edge : bestedgeto) {
            if (edge != -1) best.push_back(edge);
        }
        has_bestedges_[b] = true;
        bestedge_[b] = -1;
        for (int edge : best) {
            if (bestedge_[b] == -1 || slack(edge) < slack(bestedge_[b])) bestedge_[b] = edge;
        }
    }

    void expand_blossom(int b, bool endstage) {
        for (int s : blossomchilds_[b]) {
            blossomparent_[s] = -1;
            if (s < n_) {
                inblossom_[s] = s;
            } else if (endstage && dualvar_[s] == 0) {
                expand_blossom(s, endstage);
            } else {
                for (int leaf : leaves(s)) inblossom_[leaf] = s;
            }
        }

        if (!endstage && label_[b] == 2) {
            // Relabel the sub-blossoms on the even-length path from the
            // entry child to the base.
            const auto& childs = blossomchilds_[b];
            const auto& endps = blossomendps_[b];
            const int len = static_cast<int>(childs.size());
            auto at = [len](int j) { return j < 0 ? j + len : j; };

            int entrychild = inblossom_[endpoint_[labelend_[b] ^ 1]];
            int j = static_cast<int>(std::find(childs.begin(), childs.end(), entrychild) - childs.begin());
            int jstep = 0;
            int endptrick = 0;
            if (j & 1) {
                j -= len;
                jstep = 1;
                endptrick = 0;
            } else {
                jstep = -1;
                endptrick = 1;
            }
            int p = labelend_[b];
            while (j != 0) {
                label_[endpoint_[p ^ 1]] = 0;
                label_[endpoint_[endps[at(j - endptrick)] ^ endptrick ^ 1]] = 0;
                assign_label(endpoint_[p ^ 1], 2, p);
                allowedge_[endps[at(j - endptrick)] / 2] = true;
                j += jstep;
                p = endps[at(j - endptrick)] ^ endptrick;
                allowedge_[p / 2] = true;
                j += jstep;
            }
            int bv = childs[at(j)];
            label_[endpoint_[p ^ 1]] = label_[bv] = 2;
            labelend_[endpoint_[p ^ 1]] = labelend_[bv] = p;
            bestedge_[bv] = -1;
            j += jstep;
            while (childs[at(j)] != entrychild) {
                bv = childs[at(j)];
                if (label_[bv] == 1) {
                    j += jstep;
                    continue;
                }
                int labelled = -1;
                for (int leaf : leaves(bv)) {
                    if (label_[leaf] != 0) {
                        labelled = leaf;
                        break;
                    }
                }
                if (labelled != -1) {
                    label_[labelled] = 0;
                    label_[endpoint_[mate_[blossombase_[bv]]]] = 0;
                    assign_label(labelled, 2, labelend_[labelled]);
                }
                j += jstep;
            }
        }

        label_[b] = labelend_[b] = -1;
        blossomchilds_[b].clear();
        blossomendps_[b].clear();
        blossombase_[b] = -1;
        blossombestedges_[b].clear();
        has_bestedges_[b] = false;
        bestedge_[b] = -1;
        unusedblossoms_.push_back(b);
    }

    // Swap matched/unmatched edges along the alternating path inside blossom b
    // from vertex v to the base, then rotate b so that v becomes its base.
    void augment_blossom(int b, int v) {
        int t = v;
        while (blossomparent_[t] != b) t = blossomparent_[t];
        if (t >= n_) augment_blossom(t, v);

        auto& childs = blossomchilds_[b];
        auto& endps = blossomendps_[b];
        const int len = static_cast<int>(childs.size());
        auto at = [len](int j) { return j < 0 ? j + len : j; };

        int i = static_cast<int>(std::find(childs.begin(), childs.end(), t) - childs.begin());
        int j = i;
        int jstep = 0;
        int endptrick = 0;
        if (i & 1) {
            j -= len;
            jstep = 1;
            endptrick = 0;
        } else {
            jstep = -1;
            endptrick = 1;
        }
        while (j != 0) {
            j += jstep;
            t = childs[at(j)];
            int p = endps[at(j - endptrick)] ^ endptrick;
            if (t >= n_) augment_blossom(t, endpoint_[p]);
            j += jstep;
            t = childs[at(j)];
            if (t >= n_) augment_blossom(t, endpoint_[p ^ 1]);
            mate_[endpoint_[p]] = p ^ 1;
            mate_[endpoint_[p ^ 1]] = p;
        }
        std::rotate(childs.begin(), childs.begin() + i, childs.end());
        std::rotate(endps.begin(), endps.begin() + i, endps.end());
        blossombase_[b] = blossombase_[childs[0]];
    }

    void augment_matching(int k) {
        const int v = edges_[k].u;
        const int w = edges_[k].v;
        const std::pair<int, int> starts[2] = {{v, 2 * k + 1}, {w, 2 * k}};
        for (auto [s, p] : starts) {
            for (;;) {
                int bs = inblossom_[s];
                if (bs >= n_) augment_blossom(bs, s);
                mate_[s] = p;
                if (labelend_[bs] == -1) break;
                int t = endpoint_[labelend_[bs]];
                int bt = inblossom_[t];
                s = endpoint_[labelend_[bt]];
                int j = endpoint_[labelend_[bt] ^ 1];
                if (bt >= n_) augment_blossom(bt, j);
                mate_[j] = labelend_[bt];
                p = labelend_[bt] ^ 1;
            }
        }
    }

    const int n_;
    const std::vector<Edge>& edges_;
    const int nedge_;

    std::vector<int> endpoint_;
    std::vector<std::vector<int>> neighbend_;
    std::vector<int> mate_;
    std::vector<int> label_;
    std::vector<int> labelend_;
    std::vector<int> inblossom_;
    std::vector<int> blossomparent_;
    std::vector<std::vector<int>> blossomchilds_;
    std::vector<int> blossombase_;
    std::vector<std::vector<int>> blossomendps_;
    std::vector<int> bestedge_;
    std::vector<std::vector<int>> blossombestedges_;
    std::vector<bool> has_bestedges_;
    std::vector<int> unusedblossoms_;
    std::vector<Weight> dualvar_;
    std::vector<bool> allowedge_;
    std::vector<int> queue_;
};

Matching collect(const WeightedGraph& graph, const std::vector<int>& mate) {
    Matching m;
    for (const auto& e : graph.edges) {
        if (mate[e.u] == e.v) {
            m.pairs.emplace_back(std::min(e.u, e.v), std::max(e.u, e.v));
            m.total_weight += e.weight;
        }
    }
    std::sort(m.pairs.begin(), m.pairs.end());
    return m;
}

// Keeps doubled duals and the inflated weights of the cardinality variant
// well inside int64.
constexpr Weight kMaxEdgeWeight = Weight{1} << 44;

}  // namespace

void validate(const WeightedGraph& graph) {
    if (graph.node_count < 0) throw ValidationError("graph: negative node count");
    std::set<std::pair<int, int>> seen;
    for (const auto& e : graph.edges) {
        if (e.u < 0 || e.v < 0 || e.u >= graph.node_count || e.v >= graph.node_count) {
            throw ValidationError("graph: edge endpoint out of range (" + std::to_string(e.u) + ", " +
                                  std::to_string(e.v) + ")");
        }
        if (e.u == e.v) throw ValidationError("graph: self-loop on node " + std::to_string(e.u));
        if (e.weight < 0) throw ValidationError("graph: negative edge weight");
        if (e.weight > kMaxEdgeWeight) throw ValidationError("graph: edge weight too large");
        if (!seen.emplace(std::min(e.u, e.v), std::max(e.u, e.v)).second) {
            throw ValidationError("graph: duplicate edge (" + std::to_string(e.u) + ", " +
                                  std::to_string(e.v) + ")");
        }
    }
}

Matching max_weight_matching(const WeightedGraph& graph) {
    validate(graph);
    if (graph.edges.empty()) return {};
    BlossomSolver solver(graph);
    return collect(graph, solver.solve());
}

Matching max_cardinality_max_weight_matching(const WeightedGraph& graph) {
    validate(graph);
    if (graph.edges.empty()) return {};
    Weight max_weight = 0;
    for (const auto& e : graph.edges) max_weight = std::max(max_weight, e.weight);
    const Weight base = static_cast<Weight>(graph.node_count / 2) * max_weight + 1;
    if (base > kMaxEdgeWeight) throw ValidationError("graph: weights too large for cardinality inflation");

    WeightedGraph inflated{graph.node_count, graph.edges};
    for (auto& e : inflated.edges) e.weight += base;
    BlossomSolver solver(inflated);
    return collect(graph, solver.solve());
}

}  // namespace swissfair
