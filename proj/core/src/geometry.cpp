#include "branchlight/geometry.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "branchlight/numerics.hpp"

namespace branchlight {

namespace {
constexpr double kParallelTol = 1e-12;
constexpr double kSnapRel = 1e-12;
constexpr double kTileRel = 1e-9;
} // namespace

double segment::mass() const {
    compensated_sum s;
    for (const auto& p : pieces) s.add((p.t1 - p.t0) * p.density);
    return s.value();
}

void validate(const measure& m) {
    for (const auto& seg : m.segments) {
        const double len = seg.length();
        if (!(len > 0.0)) throw std::invalid_argument("measure: segment with zero length");
        if (seg.a.y < -kParallelTol || seg.b.y < -kParallelTol)
            throw std::invalid_argument("measure: segment leaves the upper half-plane");
        if (seg.pieces.empty()) throw std::invalid_argument("measure: segment without density pieces");
        const double tol = kTileRel * len;
        double cursor = 0.0;
        for (const auto& p : seg.pieces) {
            if (p.density < 0.0) throw std::invalid_argument("measure: negative density");
            if (std::abs(p.t0 - cursor) > tol || p.t1 <= p.t0)
                throw std::invalid_argument("measure: pieces must tile [0, length] in order");
            cursor = p.t1;
        }
        if (std::abs(cursor - len) > tol)
            throw std::invalid_argument("measure: pieces must cover the full segment");
    }
    for (const auto& a : m.atoms) {
        if (a.pos.y < -kParallelTol) throw std::invalid_argument("measure: atom below the ground line");
        if (a.mass < 0.0) throw std::invalid_argument("measure: negative atom mass");
    }
}

double total_mass(const measure& m) {
    compensated_sum s;
    for (const auto& seg : m.segments) s.add(seg.mass());
    for (const auto& a : m.atoms) s.add(a.mass);
    return s.value();
}

double projected_density::interval_mass() const {
    compensated_sum s;
    for (std::size_t i = 0; i < values.size(); ++i)
        s.add(values[i] * (breakpoints[i + 1] - breakpoints[i]));
    return s.value();
}

double projected_density::atom_mass() const {
    compensated_sum s;
    for (const auto& a : atoms) s.add(a.mass);
    return s.value();
}

projected_density project(const measure& m, const direction& n) {
    struct strip {
        double lo, hi, phi;
    };
    std::vector<strip> strips;
    std::vector<projected_atom> atoms;
    const vec2 perp = n.perp();

    for (const auto& seg : m.segments) {
        const double len = seg.length();
        const vec2 t = (seg.b - seg.a) * (1.0 / len);
        const double jac = t.dot(perp);
        const double y0 = seg.a.dot(perp);
        if (std::abs(jac) < kParallelTol) {
            // parallel to the light: all mass lands on one screen point
            atoms.push_back({y0, seg.mass()});
            continue;
        }
        for (const auto& p : seg.pieces) {
            if (p.density <= 0.0) continue;
            double lo = y0 + jac * p.t0;
            double hi = y0 + jac * p.t1;
            if (lo > hi) std::swap(lo, hi);
            strips.push_back({lo, hi, p.density / std::abs(jac)});
        }
    }
    for (const auto& a : m.atoms)
        if (a.mass > 0.0) atoms.push_back({a.pos.dot(perp), a.mass});

    projected_density out;

    if (!strips.empty()) {
        double span_lo = strips.front().lo, span_hi = strips.front().hi;
        for (const auto& s : strips) {
            span_lo = std::min(span_lo, s.lo);
            span_hi = std::max(span_hi, s.hi);
        }
        const double snap = kSnapRel * std::max(span_hi - span_lo, 1e-300);

        std::vector<double> cuts;
        cuts.reserve(2 * strips.size());
        for (const auto& s : strips) {
            cuts.push_back(s.lo);
            cuts.push_back(s.hi);
        }
        std::sort(cuts.begin(), cuts.end());
        std::vector<double> grid;
        for (double c : cuts)
            if (grid.empty() || c - grid.back() > snap) grid.push_back(c);

        auto locate = [&](double y) {
            auto it = std::lower_bound(grid.begin(), grid.end(), y - snap);
            return static_cast<std::size_t>(it - grid.begin());
        };

        std::vector<double> delta(grid.size() + 1, 0.0);
        for (const auto& s : strips) {
            const std::size_t i0 = locate(s.lo);
            const std::size_t i1 = locate(s.hi);
            if (i1 <= i0) {
                // thinner than the snap width: keep its mass as a point term
                atoms.push_back({s.lo, s.phi * (s.hi - s.lo)});
                continue;
            }
            delta[i0] += s.phi;
            delta[i1] -= s.phi;
        }
        out.breakpoints = std::move(grid);
        out.values.resize(out.breakpoints.size() - 1);
        double run = 0.0;
        for (std::size_t i = 0; i < out.values.size(); ++i) {
            run += delta[i];
            out.values[i] = std::max(run, 0.0);
        }
    }

    std::sort(atoms.begin(), atoms.end(),
              [](const projected_atom& a, const projected_atom& b) { return a.y < b.y; });
    // coincident projected atoms merge
    for (const auto& a : atoms) {
        if (!out.atoms.empty() && a.y - out.atoms.back().y <= kSnapRel * std::max(1.0, std::abs(a.y)))
            out.atoms.back().mass += a.mass;
        else
            out.atoms.push_back(a);
    }
    return out;
}

double density_at(const projected_density& pd, double y) {
    if (pd.breakpoints.empty()) return 0.0;
    if (y < pd.breakpoints.front() || y >= pd.breakpoints.back()) return 0.0;
    const auto it = std::upper_bound(pd.breakpoints.begin(), pd.breakpoints.end(), y);
    const std::size_t i = static_cast<std::size_t>(it - pd.breakpoints.begin());
    if (i == 0 || i > pd.values.size()) return 0.0;
    return pd.values[i - 1];
}

namespace {

measure measure_from_obj(const nlohmann::json& j) {
    measure m;
    if (j.contains("segments")) {
        for (const auto& js : j.at("segments")) {
            segment s;
            s.a = {js.at("a").at(0).get<double>(), js.at("a").at(1).get<double>()};
            s.b = {js.at("b").at(0).get<double>(), js.at("b").at(1).get<double>()};
            for (const auto& jp : js.at("pieces"))
                s.pieces.push_back({jp.at("t0").get<double>(), jp.at("t1").get<double>(),
                                    jp.at("density").get<double>()});
            m.segments.push_back(std::move(s));
        }
    }
    if (j.contains("atoms")) {
        for (const auto& ja : j.at("atoms"))
            m.atoms.push_back({{ja.at("pos").at(0).get<double>(), ja.at("pos").at(1).get<double>()},
                               ja.at("mass").get<double>()});
    }
    validate(m);
    return m;
}

} // namespace

measure measure_from_json(const std::string& text) {
    return measure_from_obj(nlohmann::json::parse(text));
}

std::string measure_to_json(const measure& m) {
    nlohmann::json j;
    j["segments"] = nlohmann::json::array();
    for (const auto& s : m.segments) {
        nlohmann::json js;
        js["a"] = {s.a.x, s.a.y};
        js["b"] = {s.b.x, s.b.y};
        js["pieces"] = nlohmann::json::array();
        for (const auto& p : s.pieces)
            js["pieces"].push_back({{"t0", p.t0}, {"t1", p.t1}, {"density", p.density}});
        j["segments"].push_back(std::move(js));
    }
    j["atoms"] = nlohmann::json::array();
    for (const auto& a : m.atoms)
        j["atoms"].push_back({{"pos", {a.pos.x, a.pos.y}}, {"mass", a.mass}});
    return j.dump(2);
}

measure load_measure(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open measure file: " + path);
    nlohmann::json j;
    in >> j;
    return measure_from_obj(j);
}

} // namespace branchlight
