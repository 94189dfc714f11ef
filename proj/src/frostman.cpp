#include "covlab/frostman.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <string>

#include "covlab/errors.hpp"
#include "covlab/rng.hpp"

namespace covlab {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::uint64_t kTreeNodeTag = 0x54524545ULL;
}  // namespace

// ---------------------------------------------------------------------------
// Energies
// ---------------------------------------------------------------------------

double discrete_energy(std::span<const WeightedAtom> atoms, double t) {
    if (!(t > 0.0)) throw PreconditionError("discrete_energy: t must be positive");
    if (atoms.empty()) throw PreconditionError("discrete_energy: need at least one atom");
    double total = 0.0;
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        for (std::size_t j = i + 1; j < atoms.size(); ++j) {
            double d = dist(atoms[i].x, atoms[j].x);
            if (d == 0.0) return kInf;
            total += 2.0 * atoms[i].w * atoms[j].w * std::pow(d, -t);
        }
    }
    return total;
}

bool atoms_cs_uniform(std::span<const WeightedAtom> atoms, double c, double s) {
    // Exact check at the jump radii: the punctured-ball mass is a step
    // function of r while c r^s increases, so violations show at jumps.
    std::vector<std::pair<double, double>> by_dist;
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        by_dist.clear();
        for (std::size_t j = 0; j < atoms.size(); ++j) {
            if (j == i) continue;
            by_dist.emplace_back(dist(atoms[i].x, atoms[j].x), atoms[j].w);
        }
        std::sort(by_dist.begin(), by_dist.end());
        double cum = 0.0;
        std::size_t k = 0;
        while (k < by_dist.size()) {
            double r = by_dist[k].first;
            while (k < by_dist.size() && by_dist[k].first == r) cum += by_dist[k++].second;
            if (r == 0.0) return false;  // coincident atoms: no finite c works
            if (cum > c * std::pow(r, s)) return false;
        }
    }
    return true;
}

RestrictionCheck check_restriction_bound(std::span<const WeightedAtom> atoms, const Ball& a,
                                         double c, double s, double t) {
    if (!(t > 0.0) || !(t < s))
        throw PreconditionError("check_restriction_bound: need 0 < t < s");

    RestrictionCheck out;
    if (!atoms_cs_uniform(atoms, c, s)) {
        out.verdict = RestrictionVerdict::HypothesisViolated;
        out.detail = "atomic measure is not (c,s)'-uniform with the given constants";
        return out;
    }

    std::vector<WeightedAtom> inside;
    double mass = 0.0;
    for (const auto& atom : atoms) {
        if (contains(a, atom.x)) {
            inside.push_back(atom);
            mass += atom.w;
        }
    }
    double energy = inside.empty() ? 0.0 : discrete_energy(inside, t);
    double diam = 2.0 * a.radius;
    double bound = c * s / (s - t) * std::pow(diam, s - t) * mass;

    out.energy = energy;
    out.bound = bound;
    out.slack = bound - energy;
    out.verdict = energy <= bound ? RestrictionVerdict::Holds : RestrictionVerdict::Fails;
    return out;
}

// ---------------------------------------------------------------------------
// Greedy separated selection
// ---------------------------------------------------------------------------

SelectionParams::SelectionParams(double s_, double eps_, double c_, double u_, Ball b, long n0_)
    : s(s_), eps(eps_), c(c_), u(u_), ball(std::move(b)), n0(n0_) {
    if (!(s > 0.0)) throw PreconditionError("selection: s must be positive");
    if (!(eps > 0.0) || !(eps < s)) throw PreconditionError("selection: eps must be in (0, s)");
    if (!(c > 0.0)) throw PreconditionError("selection: c must be positive");
    if (n0 < 2) throw PreconditionError("selection: n0 must be >= 2");
}

double SelectionParams::W() const {
    double m = std::max({c * std::exp(1.0), s / eps, 2.0});
    return std::pow(4.0, s) * m;
}

GreedyResult greedy_select(std::span<const Point> batch, const SelectionParams& params, double r_n,
                           const MassOracle& oracle) {
    if (!(r_n > 0.0)) throw PreconditionError("greedy_select: r_n must be positive");
    GreedyResult out;
    const double sep = 8.0 * r_n;
    const double threshold = std::pow(r_n, params.u + params.eps);
    const bool fast_1d = !batch.empty() && batch.front().dim() == 1;
    std::set<double> kept_1d;

    for (std::size_t j = 0; j < batch.size(); ++j) {
        const Point& x = batch[j];
        if (!contains(params.ball, x)) continue;
        ++out.in_ball;
        if (oracle.ball_mass(x, r_n) < threshold) continue;
        ++out.eligible;

        bool blocked = false;
        if (fast_1d) {
            auto it = kept_1d.lower_bound(x[0]);
            if (it != kept_1d.end() && *it - x[0] <= sep) blocked = true;
            if (!blocked && it != kept_1d.begin() && x[0] - *std::prev(it) <= sep) blocked = true;
        } else {
            for (const auto& y : out.kept) {
                if (dist(y, x) <= sep) {
                    blocked = true;
                    break;
                }
            }
        }
        if (blocked) continue;
        out.kept.push_back(x);
        out.kept_indices.push_back(static_cast<long>(j));
        if (fast_1d) kept_1d.insert(x[0]);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Tree growth
// ---------------------------------------------------------------------------

namespace {

// Sufficient uniformity test for the selected-centre measure in d = 1:
// atoms pairwise > 8 r_n apart pack at most R / (4 r_n) into a punctured
// R-ball, and R -> c R^s - R/(4 r_n m) is concave, so checking the two
// endpoint radii settles the whole range.
bool selection_uniform_1d_analytic(std::size_t m, double c_B, double s_eff, double r_n,
                                   double domain_diam) {
    double md = static_cast<double>(m);
    auto ok = [&](double R) {
        return R / (4.0 * r_n) / md <= c_B * std::pow(R, s_eff);
    };
    return ok(8.0 * r_n) && ok(std::max(domain_diam, 8.0 * r_n));
}

bool selection_uniform(const std::vector<Point>& kept, double c_B, double s_eff, double r_n,
                       double pre_radius) {
    if (kept.size() < 2) return true;
    if (kept.front().dim() == 1 &&
        selection_uniform_1d_analytic(kept.size(), c_B, s_eff, r_n, 2.0 * pre_radius))
        return true;
    if (kept.size() > 4000) return false;  // exact check too costly; reject this n
    std::vector<WeightedAtom> atoms;
    atoms.reserve(kept.size());
    double w = 1.0 / static_cast<double>(kept.size());
    for (const auto& p : kept) atoms.push_back({p, w});
    return atoms_cs_uniform(atoms, c_B, s_eff);
}

}  // namespace

std::vector<long> FractalTree::generation_nodes(int g) const {
    std::vector<long> out;
    for (std::size_t i = 0; i < nodes.size(); ++i)
        if (nodes[i].generation == g) out.push_back(static_cast<long>(i));
    return out;
}

std::vector<long> FractalTree::leaves() const { return generation_nodes(max_generation); }

FractalTree grow_tree(const MeasureModel& model, double alpha, double eps, int max_generation,
                      std::uint64_t seed, const GrowOptions& options) {
    if (max_generation < 1) throw PreconditionError("grow_tree: max_generation must be >= 1");
    if (!(alpha > 0.0)) throw PreconditionError("grow_tree: alpha must be positive");
    if (!model.has_conditional_sampler() || !model.has_exact_ball_mass())
        throw UnsupportedMode(
            "grow_tree needs exact ball mass and a conditional sampler "
            "(UniformBox(1) or CantorUniform); got " +
            model.describe());

    AnalyticProfile profile = analytic_profile(model);
    if (!(1.0 / alpha < profile.udimh))
        throw PreconditionError("grow_tree: requires 1/alpha < udimh(model)");

    const double s = model.uniform_s();
    const double c = model.uniform_c();
    const double u = model.default_u();
    if (!(eps > 0.0) || !(eps < s)) throw PreconditionError("grow_tree: eps must be in (0, s)");
    const double s_eff = s - eps;
    const int d = model.dim();

    FractalTree tree;
    tree.alpha = alpha;
    tree.eps = eps;
    tree.uniformity_exponent = s_eff;
    tree.seed = seed;
    tree.max_generation = max_generation;

    TreeNode root;
    root.center = Point::zero(d);
    for (int i = 0; i < d; ++i) root.center[i] = 0.5;
    root.pre_radius = 0.5 * std::sqrt(static_cast<double>(d));
    root.radius = 2.0 * root.pre_radius;
    root.generation = 0;
    root.weight = 1.0;
    tree.nodes.push_back(root);

    for (int g = 0; g < max_generation; ++g) {
        std::vector<long> ids = tree.generation_nodes(g);
        for (long id : ids) {
            // Node fields are re-read inside the loop: nodes may reallocate.
            const Point center = tree.nodes[static_cast<std::size_t>(id)].center;
            const double pre_radius = tree.nodes[static_cast<std::size_t>(id)].pre_radius;
            const double theta = tree.nodes[static_cast<std::size_t>(id)].weight;

            Ball pre_ball(center, pre_radius);
            double mu_B = model.exact_ball_mass(center, pre_radius);
            if (!(mu_B > 0.0))
                throw GrowthFailure("node ball carries no mass (node " + std::to_string(id) + ")",
                                    id, g);
            SelectionParams params(s, eps, c, u, pre_ball, options.n0);
            const double W = params.W();
            const double c_B = 2.0 * W * W / mu_B;
            auto sampler = model.conditional_sampler(pre_ball);
            ExactMassOracle oracle(model);
            std::uint64_t node_seed =
                derive_seed(seed, mix64(static_cast<std::uint64_t>(id) + kTreeNodeTag));

            bool expanded = false;
            long sampled_total = 0;
            for (long n = options.n0; n > 0; n *= 2) {
                double r_n = std::pow(2.0 * static_cast<double>(n), -alpha) / 2.0;
                if (2.0 * r_n > pre_radius) continue;  // children must fit inside the node
                double required_f = std::ceil(std::pow(r_n, -1.0 / alpha + eps));
                long required = required_f > 2.0 ? static_cast<long>(required_f) : 2;
                if (d == 1) {
                    // Separated points cannot outnumber the packing capacity.
                    double capacity = 2.0 * pre_radius / (8.0 * r_n) + 1.0;
                    if (capacity < static_cast<double>(required)) continue;
                }
                if (sampled_total + n > options.node_sample_budget) break;
                sampled_total += n;

                std::vector<Point> batch;
                batch.reserve(static_cast<std::size_t>(n));
                CounterRng rng(node_seed, static_cast<std::uint64_t>(n));
                for (long i = 0; i < n; ++i) batch.push_back(sampler->sample(rng));

                GreedyResult sel = greedy_select(batch, params, r_n, oracle);
                if (static_cast<long>(sel.kept.size()) < required) continue;
                if (!selection_uniform(sel.kept, c_B, s_eff, r_n, pre_radius)) continue;

                std::size_t child_count = sel.kept.size();
                if (options.trim_children_to_required)
                    child_count = static_cast<std::size_t>(required);
                double child_weight = theta / static_cast<double>(child_count);
                for (std::size_t k = 0; k < child_count; ++k) {
                    TreeNode child;
                    child.center = sel.kept[k];
                    child.pre_radius = r_n;
                    child.radius = 2.0 * r_n;
                    child.generation = g + 1;
                    child.parent = id;
                    child.weight = child_weight;
                    tree.nodes[static_cast<std::size_t>(id)].children.push_back(
                        static_cast<long>(tree.nodes.size()));
                    tree.nodes.push_back(std::move(child));
                }
                auto& node = tree.nodes[static_cast<std::size_t>(id)];
                node.c_B = c_B;
                node.mu_B = mu_B;
                node.mass_empirical = false;
                node.expansion_n = n;
                expanded = true;
                break;
            }
            if (!expanded)
                throw GrowthFailure("node " + std::to_string(id) + " (generation " +
                                        std::to_string(g) + ") exhausted its sample budget of " +
                                        std::to_string(options.node_sample_budget) +
                                        " without an admissible selection",
                                    id, g);
        }
    }
    return tree;
}

std::string validate_tree(const FractalTree& tree) {
    if (tree.nodes.empty() || tree.nodes[0].parent != -1) return "missing root";
    double leaf_weight = 0.0;
    for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
        const TreeNode& node = tree.nodes[i];
        if (node.generation == tree.max_generation) leaf_weight += node.weight;
        if (node.generation < tree.max_generation && node.children.size() < 2)
            return "node " + std::to_string(i) + " has fewer than 2 children";

        // Sibling pair checks.
        for (std::size_t a = 0; a < node.children.size(); ++a) {
            const TreeNode& ca = tree.nodes[static_cast<std::size_t>(node.children[a])];
            double slack = dist(ca.center, node.center) + ca.radius - node.radius;
            if (slack > 1e-12 * node.radius)
                return "child " + std::to_string(node.children[a]) + " escapes its parent";
            for (std::size_t b = a + 1; b < node.children.size(); ++b) {
                const TreeNode& cb = tree.nodes[static_cast<std::size_t>(node.children[b])];
                double cd = dist(ca.center, cb.center);
                if (cd <= ca.radius + cb.radius)
                    return "siblings " + std::to_string(node.children[a]) + "," +
                           std::to_string(node.children[b]) + " overlap";
                if (cd - (ca.radius + cb.radius) < 0.5 * cd - 1e-12 * cd)
                    return "sibling separation hypothesis fails at node " + std::to_string(i);
            }
        }
        // Weight conservation through each internal node.
        if (!node.children.empty()) {
            double w = 0.0;
            for (long ch : node.children) w += tree.nodes[static_cast<std::size_t>(ch)].weight;
            if (std::fabs(w - node.weight) > 1e-12) return "weights not conserved at node " + std::to_string(i);
        }
    }
    if (std::fabs(leaf_weight - 1.0) > 1e-12) return "leaf weights do not sum to 1";
    return "";
}

// ---------------------------------------------------------------------------
// Tree energies
// ---------------------------------------------------------------------------

namespace {

// Per-internal-generation terms of the tree energy bound (without the
// 2^t s/(s-t) prefactor).
std::vector<double> bound_terms_by_generation(const FractalTree& tree, double t, double s) {
    std::vector<double> terms(static_cast<std::size_t>(tree.max_generation), 0.0);
    for (const auto& node : tree.nodes) {
        if (node.children.empty()) continue;
        double diam = 2.0 * node.radius;
        terms[static_cast<std::size_t>(node.generation)] +=
            node.weight * node.weight * node.c_B * std::pow(diam, s - t);
    }
    return terms;
}

}  // namespace

EnergyReport tree_energy(const FractalTree& tree, double t, double s, long direct_leaf_limit) {
    if (s == 0.0) s = tree.uniformity_exponent;
    if (!(t > 0.0) || !(t < s)) throw PreconditionError("tree_energy: need 0 < t < s");
    if (s > tree.uniformity_exponent + 1e-12)
        throw PreconditionError("tree_energy: s exceeds the tree's verified uniformity exponent");

    EnergyReport rep;
    rep.t = t;
    rep.s = s;

    const double factor = std::pow(2.0, t) * s / (s - t);
    std::vector<double> terms = bound_terms_by_generation(tree, t, s);
    double cum = 0.0;
    for (double term : terms) {
        cum += factor * term;
        rep.partial_bound.push_back(cum);
    }
    rep.bound_energy = cum;
    for (const auto& node : tree.nodes) rep.mass_empirical |= node.mass_empirical;

    std::vector<long> leaves = tree.leaves();
    rep.leaf_count = static_cast<long>(leaves.size());
    if (rep.leaf_count > direct_leaf_limit) {
        rep.direct_computed = false;
        return rep;
    }

    // Ancestor chains for split-generation attribution.
    const int depth = tree.max_generation;
    std::vector<std::vector<long>> chain(leaves.size());
    for (std::size_t i = 0; i < leaves.size(); ++i) {
        chain[i].assign(static_cast<std::size_t>(depth + 1), 0);
        long cur = leaves[i];
        for (int g = depth; g >= 0; --g) {
            chain[i][static_cast<std::size_t>(g)] = cur;
            cur = tree.nodes[static_cast<std::size_t>(cur)].parent;
        }
    }

    std::vector<double> direct_by_gen(static_cast<std::size_t>(depth), 0.0);
    for (std::size_t i = 0; i < leaves.size(); ++i) {
        const TreeNode& a = tree.nodes[static_cast<std::size_t>(leaves[i])];
        for (std::size_t j = i + 1; j < leaves.size(); ++j) {
            const TreeNode& b = tree.nodes[static_cast<std::size_t>(leaves[j])];
            double dd = dist(a.center, b.center);
            int split = 0;
            while (split < depth && chain[i][static_cast<std::size_t>(split + 1)] ==
                                        chain[j][static_cast<std::size_t>(split + 1)])
                ++split;
            double e = dd == 0.0 ? kInf : 2.0 * a.weight * b.weight * std::pow(dd, -t);
            direct_by_gen[static_cast<std::size_t>(split)] += e;
        }
    }
    double dcum = 0.0;
    for (double e : direct_by_gen) {
        dcum += e;
        rep.partial_direct.push_back(dcum);
    }
    rep.direct_energy = dcum;
    return rep;
}

CertifyReport certify_lower_bound(const FractalTree& tree, double t, double s) {
    if (s == 0.0) s = tree.uniformity_exponent;
    if (!(t > 0.0) || !(t < s)) throw PreconditionError("certify_lower_bound: need 0 < t < s");

    CertifyReport rep;
    rep.t = t;
    const double factor = std::pow(2.0, t) * s / (s - t);
    std::vector<double> terms = bound_terms_by_generation(tree, t, s);
    double cum = 0.0;
    for (double term : terms) {
        cum += factor * term;
        rep.partial_bound.push_back(cum);
    }
    rep.bound_energy = cum;

    if (terms.size() < 2) {
        rep.verdict = CertifyVerdict::Inconclusive;
        rep.detail = "tree too shallow to assess the decay of the bound sums";
        return rep;
    }
    double last = factor * terms.back();
    rep.last_increment_ratio = last / cum;
    if (std::isfinite(cum) && cum > 0.0 && rep.last_increment_ratio < 0.01) {
        rep.verdict = CertifyVerdict::Certified;
        rep.detail = "bound sums numerically Cauchy";
    } else {
        rep.verdict = CertifyVerdict::Inconclusive;
        rep.detail = std::isfinite(cum)
                         ? "last generation still contributes " +
                               std::to_string(100.0 * rep.last_increment_ratio) + "% of the bound"
                         : "bound energy not finite";
    }
    return rep;
}

}  // namespace covlab
