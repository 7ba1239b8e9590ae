#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "lumitact/analysis.hpp"
#include "lumitact/batch.hpp"
#include "lumitact/inference.hpp"
#include "lumitact/kinemetrics.hpp"
#include "lumitact/landing_metrics.hpp"
#include "lumitact/photometry.hpp"
#include "lumitact/session.hpp"
#include "lumitact/trial_log.hpp"

namespace py = pybind11;
using namespace lumitact;

namespace {

Vec3 vec3(const std::array<double, 3>& a)
{
    return {a[0], a[1], a[2]};
}

std::vector<Vec2> points2(const std::vector<std::array<double, 2>>& pts)
{
    std::vector<Vec2> out;
    for (const auto& p : pts)
        out.emplace_back(p[0], p[1]);
    return out;
}

py::dict anova_dict(const AnovaTable& table)
{
    py::dict effects;
    for (const auto& e : table.effects) {
        py::dict d;
        d["ss"] = e.sum_of_squares;
        d["df"] = e.df;
        d["error_ss"] = e.error_sum_of_squares;
        d["error_df"] = e.error_df;
        d["F"] = e.f;
        d["p"] = e.p;
        d["degenerate"] = e.degenerate;
        effects[py::str(e.name)] = d;
    }
    return effects;
}

}  // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "lumitact simulation and analysis core";

    py::register_exception<DegenerateError>(m, "DegenerateError", PyExc_ValueError);
    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);

    m.def(
        "illuminance",
        [](std::array<double, 3> led, std::array<double, 3> axis, std::array<double, 3> sensor,
           std::array<double, 3> normal) {
            return illuminance(vec3(led), vec3(axis), {vec3(sensor), vec3(normal)}, PhotometricParams{});
        },
        py::arg("led"), py::arg("axis"), py::arg("sensor"), py::arg("normal") = std::array<double, 3>{0, 0, 1});
    m.def(
        "photocurrent", [](double e) { return photocurrent(e, PhotometricParams{}); }, py::arg("illuminance"));

    m.def("reg_inc_beta", &reg_inc_beta, py::arg("x"), py::arg("a"), py::arg("b"));
    m.def("t_two_tailed_p", &t_two_tailed_p, py::arg("t"), py::arg("df"));
    m.def("f_sf", &f_sf, py::arg("f"), py::arg("df1"), py::arg("df2"));
    m.def(
        "paired_t_test",
        [](const std::vector<double>& a, const std::vector<double>& b) {
            const TTestResult r = paired_t_test(a, b);
            return py::make_tuple(r.t, r.df, r.p);
        },
        py::arg("a"), py::arg("b"));
    m.def(
        "rm_anova_two_way",
        [](const std::vector<std::tuple<int, int, int, double>>& rows, double alpha) {
            std::vector<Observation> obs;
            for (const auto& [s, a, b, v] : rows)
                obs.push_back({s, a, b, v});
            return anova_dict(rm_anova_two_way(RMDataset(obs), alpha));
        },
        py::arg("observations"), py::arg("alpha") = 0.05);
    m.def(
        "rm_anova_one_way",
        [](const std::vector<std::vector<double>>& values, double alpha) {
            return anova_dict(rm_anova_one_way(values, alpha));
        },
        py::arg("values"), py::arg("alpha") = 0.05);

    m.def(
        "derivative_series",
        [](const std::vector<std::array<double, 3>>& points, double dt, int order, std::optional<int> window) {
            Trajectory traj{dt, {}};
            for (const auto& p : points)
                traj.points.push_back(vec3(p));
            std::vector<std::array<double, 3>> out;
            for (const Vec3& v : derivative_series(traj, order, window))
                out.push_back({v.x(), v.y(), v.z()});
            return out;
        },
        py::arg("points"), py::arg("dt"), py::arg("order"), py::arg("window") = std::nullopt);

    m.def(
        "containment_diameter",
        [](const std::vector<std::array<double, 2>>& pts, double q, const std::string& center) {
            return containment_diameter(points2(pts), q, parse_center_mode(center));
        },
        py::arg("displacements"), py::arg("quantile") = 0.9, py::arg("center") = "plate");
    m.def(
        "displacement_stats",
        [](const std::vector<std::array<double, 2>>& pts) {
            const auto pts2 = points2(pts);
            const DisplacementStats s = group_stats(std::span<const Vec2>(pts2));
            py::dict d;
            d["n"] = s.n;
            d["mean_mm"] = s.mean;
            d["std_mm"] = s.std_deviation ? py::cast(*s.std_deviation) : py::none();
            d["max_mm"] = s.maximum;
            return d;
        },
        py::arg("displacements"));
    m.def(
        "landing_axis_regression",
        [](const std::vector<std::array<double, 2>>& pts) {
            const AxisFit f = landing_axis_regression(points2(pts));
            return py::make_tuple(f.intercept, f.slope, f.r_squared);
        },
        py::arg("displacements"));

    m.def(
        "simulate",
        [](const std::filesystem::path& config, const std::filesystem::path& out, std::optional<std::uint64_t> seed,
           std::optional<int> workers) {
            ExperimentConfig c = load_config(config);
            c.output_dir = out;
            if (seed)
                c.base_seed = *seed;
            if (workers)
                c.workers = *workers;
            c.validate();
            py::gil_scoped_release release;
            return run_batch(c).trials.size();
        },
        py::arg("config"), py::arg("out"), py::arg("seed") = std::nullopt, py::arg("workers") = std::nullopt);
    m.def(
        "analyze",
        [](const std::filesystem::path& logs, const std::filesystem::path& out, std::optional<int> smooth,
           double quantile, const std::string& center, bool strict) {
            AnalyzeOptions o;
            o.strict = strict;
            o.analysis.smoothing_window = smooth;
            o.analysis.quantile = quantile;
            o.analysis.center = parse_center_mode(center);
            py::gil_scoped_release release;
            const AnalysisReport r = analyze(logs, out, o);
            return std::make_pair(r.trials, r.warnings);
        },
        py::arg("logs"), py::arg("out"), py::arg("smooth") = std::nullopt, py::arg("quantile") = 0.9,
        py::arg("center") = "plate", py::arg("strict") = false);

    // Interactive session state machine; messages are JSON text.
    py::class_<Session>(m, "Session")
        .def(py::init([](const std::string& id, double stream_rate_hz, bool expose_altitude) {
                 SessionSettings s;
                 s.options.stream_rate_hz = stream_rate_hz;
                 s.options.expose_altitude_in_tactile = expose_altitude;
                 return Session(id, s);
             }),
             py::arg("id") = "py", py::arg("stream_rate_hz") = 50.0, py::arg("expose_altitude") = false)
        .def("handle",
             [](Session& s, const std::string& frame) {
                 std::vector<std::string> out;
                 for (const auto& j : s.handle_text(frame))
                     out.push_back(j.dump());
                 return out;
             })
        .def("tick",
             [](Session& s) {
                 std::vector<std::string> out;
                 for (const auto& j : s.tick())
                     out.push_back(j.dump());
                 return out;
             })
        .def_property_readonly("phase", [](const Session& s) { return std::string(to_string(s.phase())); })
        .def_property_readonly("steps_per_message", &Session::steps_per_message)
        .def("log_text", &Session::log_text);
}
