#include "covlab/io.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "covlab/errors.hpp"

namespace covlab {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    // Trim to the shortest representation that round-trips.
    for (int prec = 1; prec < 17; ++prec) {
        char probe[40];
        std::snprintf(probe, sizeof probe, "%.*g", prec, v);
        double back = 0.0;
        std::sscanf(probe, "%lf", &back);
        if (back == v) return probe;
    }
    return buf;
}

std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char b : bytes) {
        h ^= b;
        h *= 0x100000001B3ULL;
    }
    return h;
}

std::string digest_hex(const std::string& bytes) {
    char buf[24];
    std::snprintf(buf, sizeof buf, "%016" PRIx64, fnv1a64(bytes));
    return buf;
}

namespace {

void put_metadata(std::ostringstream& out, const std::vector<std::string>& metadata) {
    for (const auto& line : metadata) out << "# " << line << "\n";
}

}  // namespace

std::string curve_csv(const SpectrumCurve& curve, const std::vector<std::string>& metadata) {
    std::ostringstream out;
    put_metadata(out, metadata);
    out << "s,value\n";
    for (std::size_t i = 0; i < curve.size(); ++i)
        out << format_double(curve.s_at(i)) << "," << format_double(curve.values[i]) << "\n";
    return out.str();
}

std::string hull_csv(const SpectrumCurve& input, const SpectrumCurve& hull,
                     const SpectrumCurve& tilde, const std::vector<std::string>& metadata) {
    std::ostringstream out;
    put_metadata(out, metadata);
    out << "s,input,hull,tilde\n";
    for (std::size_t i = 0; i < input.size(); ++i)
        out << format_double(input.s_at(i)) << "," << format_double(input.values[i]) << ","
            << format_double(hull.values[i]) << "," << format_double(tilde.values[i]) << "\n";
    return out.str();
}

std::string window_csv(const std::vector<WindowRow>& rows,
                       const std::vector<std::string>& metadata) {
    std::ostringstream out;
    put_metadata(out, metadata);
    out << "j,level,cells_hit,cells_in_intersection\n";
    for (const auto& r : rows)
        out << r.j << "," << r.level << "," << r.cells_hit << "," << r.cells_in_intersection
            << "\n";
    return out.str();
}

std::string cover_csv(const CoverSequence& cover, long first, long last,
                      const std::vector<std::string>& metadata) {
    std::ostringstream out;
    put_metadata(out, metadata);
    out << "n,radius";
    for (int i = 0; i < cover.config().model.dim(); ++i) out << ",x" << i;
    out << "\n";
    for (long n = first; n <= last; ++n) {
        out << n << "," << format_double(cover.radius(n));
        Point p = cover.center(n);
        for (int i = 0; i < p.dim(); ++i) out << "," << format_double(p[i]);
        out << "\n";
    }
    return out.str();
}

std::string coarse_counts_csv(const CoarseSpectrumReport& report, const SpectrumCurve& g,
                              const std::vector<std::string>& metadata) {
    std::ostringstream out;
    put_metadata(out, metadata);
    out << "table,level,s,value\n";
    for (std::size_t li = 0; li < report.levels.size(); ++li)
        for (std::size_t si = 0; si < report.s_count; ++si)
            out << "count," << report.levels[li] << "," << format_double(report.s_at(si)) << ","
                << format_double(report.counts[li][si]) << "\n";
    for (std::size_t si = 0; si < g.size(); ++si)
        out << "G,," << format_double(g.s_at(si)) << "," << format_double(g.values[si]) << "\n";
    return out.str();
}

std::string energy_csv(const EnergyReport& report, const std::vector<std::string>& metadata) {
    std::ostringstream out;
    put_metadata(out, metadata);
    out << "generation,partial_direct,partial_bound\n";
    std::size_t rows = std::max(report.partial_direct.size(), report.partial_bound.size());
    for (std::size_t gidx = 0; gidx < rows; ++gidx) {
        out << gidx << ",";
        if (gidx < report.partial_direct.size()) out << format_double(report.partial_direct[gidx]);
        out << ",";
        if (gidx < report.partial_bound.size()) out << format_double(report.partial_bound[gidx]);
        out << "\n";
    }
    return out.str();
}

std::string tree_text(const FractalTree& tree, const std::vector<std::string>& metadata) {
    std::ostringstream out;
    for (const auto& line : metadata) out << "# " << line << "\n";
    int d = tree.nodes.empty() ? 1 : tree.nodes[0].center.dim();
    out << "# columns: generation parent id center[" << d << "] radius weight c_B\n";
    out << "# alpha " << format_double(tree.alpha) << " eps " << format_double(tree.eps)
        << " uniformity_exponent " << format_double(tree.uniformity_exponent) << " seed "
        << tree.seed << " max_generation " << tree.max_generation << " dim " << d << "\n";
    for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
        const TreeNode& nd = tree.nodes[i];
        out << nd.generation << " " << nd.parent << " " << i;
        for (int k = 0; k < nd.center.dim(); ++k) out << " " << format_double(nd.center[k]);
        out << " " << format_double(nd.radius) << " " << format_double(nd.weight) << " "
            << format_double(nd.c_B) << "\n";
    }
    return out.str();
}

FractalTree parse_tree_text(const std::string& text) {
    FractalTree tree;
    std::istringstream in(text);
    std::string line;
    int dim = 1;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::istringstream meta(line.substr(1));
            std::string key;
            while (meta >> key) {
                if (key == "alpha") meta >> tree.alpha;
                else if (key == "eps") meta >> tree.eps;
                else if (key == "uniformity_exponent") meta >> tree.uniformity_exponent;
                else if (key == "seed") meta >> tree.seed;
                else if (key == "max_generation") meta >> tree.max_generation;
                else if (key == "dim") meta >> dim;
            }
            continue;
        }
        std::istringstream row(line);
        TreeNode nd;
        long id = 0;
        row >> nd.generation >> nd.parent >> id;
        nd.center = Point::zero(dim);
        for (int k = 0; k < dim; ++k) row >> nd.center[k];
        row >> nd.radius >> nd.weight >> nd.c_B;
        if (row.fail()) throw Error("tree text: malformed node line: " + line);
        nd.pre_radius = nd.radius / 2.0;
        tree.nodes.push_back(nd);
        if (nd.parent >= 0)
            tree.nodes[static_cast<std::size_t>(nd.parent)].children.push_back(id);
    }
    if (tree.nodes.empty()) throw Error("tree text: no nodes");
    return tree;
}

SpectrumCurve parse_curve_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::vector<double> ss, vs;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        auto comma = line.find(',');
        if (comma == std::string::npos) continue;
        try {
            double s = std::stod(line.substr(0, comma));
            double v = std::stod(line.substr(comma + 1));
            ss.push_back(s);
            vs.push_back(v);
        } catch (const std::exception&) {
            continue;  // header row
        }
    }
    if (ss.size() < 2) throw Error("curve csv: need at least two data rows");
    SpectrumCurve c;
    c.start = ss.front();
    c.step = (ss.back() - ss.front()) / static_cast<double>(ss.size() - 1);
    if (!(c.step > 0.0)) throw Error("curve csv: grid must be increasing");
    c.values = vs;
    return c;
}

void write_file(const std::string& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open for writing: " + path);
    out << body;
    if (!out) throw Error("write failed: " + path);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open for reading: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace covlab
