#include "branchlight/sunlight.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <stdexcept>

#include <json.hpp>

#include "branchlight/numerics.hpp"

namespace branchlight {

void validate(const light_field& f) {
    if (f.samples.empty()) throw std::invalid_argument("light_field: needs at least one sample");
    for (const auto& s : f.samples)
        if (!(s.weight >= 0.0)) throw std::invalid_argument("light_field: negative weight");
}

double sunlight_single(const measure& m, const direction& n) {
    const projected_density pd = project(m, n);
    compensated_sum s;
    for (std::size_t i = 0; i < pd.values.size(); ++i) {
        const double len = pd.breakpoints[i + 1] - pd.breakpoints[i];
        s.add(len * (-std::expm1(-pd.values[i])));
    }
    return s.value();
}

double sunlight_multi(const measure& m, const light_field& field) {
    validate(field);
    const std::size_t n = field.samples.size();
    std::vector<double> vals(n, 0.0);
    parallel_for(n, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t k = lo; k < hi; ++k)
            vals[k] = field.samples[k].weight * sunlight_single(m, field.samples[k].n);
    });
    return compensated_total(vals);
}

light_field uniform_field(int M) {
    if (M < 1) throw std::invalid_argument("uniform_field: M must be >= 1");
    light_field f;
    f.samples.reserve(static_cast<std::size_t>(M));
    const double w = 2.0 * std::numbers::pi / M;
    for (int k = 0; k < M; ++k) f.samples.push_back({{w * k}, w});
    return f;
}

light_field aligned_uniform_field(int M, std::span<const double> align_angles) {
    constexpr int kPanelPoints = 8;
    if (M < kPanelPoints) throw std::invalid_argument("aligned_uniform_field: M too small");
    const double two_pi = 2.0 * std::numbers::pi;

    std::vector<double> marks;
    for (double a : align_angles) {
        double r = std::fmod(a, two_pi);
        if (r < 0) r += two_pi;
        marks.push_back(r);
    }
    if (marks.empty()) marks.push_back(0.0);
    std::sort(marks.begin(), marks.end());
    marks.erase(std::unique(marks.begin(), marks.end(),
                            [](double a, double b) { return b - a < 1e-12; }),
                marks.end());
    marks.push_back(marks.front() + two_pi);

    const gl_rule& rule = gl_rule::get(kPanelPoints);
    const int total_panels = std::max<int>(1, M / kPanelPoints);

    light_field f;
    for (std::size_t i = 0; i + 1 < marks.size(); ++i) {
        const double a0 = marks[i];
        const double arc = marks[i + 1] - marks[i];
        const int panels = std::max(1, static_cast<int>(std::lround(total_panels * arc / two_pi)));
        for (int p = 0; p < panels; ++p) {
            // cosine-graded edges cluster panels toward both arc ends
            const double t0 = 0.5 * (1.0 - std::cos(std::numbers::pi * p / panels));
            const double t1 = 0.5 * (1.0 - std::cos(std::numbers::pi * (p + 1) / panels));
            const double lo = a0 + arc * t0;
            const double hi = a0 + arc * t1;
            const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
            for (std::size_t q = 0; q < rule.x.size(); ++q)
                f.samples.push_back({{mid + half * rule.x[q]}, half * rule.w[q]});
        }
    }
    return f;
}

namespace {

light_field field_from_obj(const nlohmann::json& j) {
    light_field f;
    for (const auto& js : j)
        f.samples.push_back({{js.at("theta").get<double>()}, js.at("weight").get<double>()});
    validate(f);
    return f;
}

} // namespace

light_field field_from_json(const std::string& text) {
    return field_from_obj(nlohmann::json::parse(text));
}

std::string field_to_json(const light_field& f) {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& s : f.samples) j.push_back({{"theta", s.n.theta}, {"weight", s.weight}});
    return j.dump(2);
}

light_field load_field(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open light field file: " + path);
    nlohmann::json j;
    in >> j;
    return field_from_obj(j);
}

} // namespace branchlight
