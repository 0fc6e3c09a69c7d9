// Batch front end: reads point or tree collections, runs mean / median /
// feasibility / flow computations, and writes result documents plus optional
// CSV convergence traces.

#include <cstdint>
#include <cstdio>
#include <exception>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hadamard/hadamard.hpp"
#include "hadamard/io.hpp"

using namespace hadamard;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitBudget = 3;

struct JobOptions {
    std::string space;
    std::string points;
    std::string trees;
    std::string weights;
    std::string algo = "cyclic";
    std::size_t cycles = 20000;
    std::size_t steps = 100000;
    double lambda_c = 1.0;
    double tol = 0.0;
    std::uint64_t seed = 0;
    std::string out;
    std::string trace;
    double t = 0.5;
    std::size_t k = 10000;
    std::vector<std::string> centers;
    std::vector<double> radii;
};

struct SpaceDescriptor {
    enum class Kind { euclidean, spider, spd, bhv };
    Kind kind = Kind::euclidean;
    std::size_t param = 0;
};

SpaceDescriptor parse_space_descriptor(const std::string& text) {
    SpaceDescriptor out;
    const auto colon = text.find(':');
    const std::string name = text.substr(0, colon);
    std::size_t param = 0;
    if (colon != std::string::npos) {
        const std::string tail = text.substr(colon + 1);
        try {
            param = static_cast<std::size_t>(std::stoul(tail));
        } catch (const std::exception&) {
            throw std::invalid_argument("bad space parameter in '" + text + "'");
        }
    }
    if (name == "euclidean")
        out.kind = SpaceDescriptor::Kind::euclidean;
    else if (name == "spider")
        out.kind = SpaceDescriptor::Kind::spider;
    else if (name == "spd")
        out.kind = SpaceDescriptor::Kind::spd;
    else if (name == "bhv")
        out.kind = SpaceDescriptor::Kind::bhv;
    else
        throw std::invalid_argument("unknown space '" + name +
                                    "' (expected euclidean:D, spider:R, spd:N, or bhv)");
    if (out.kind != SpaceDescriptor::Kind::bhv && colon == std::string::npos)
        throw std::invalid_argument("space '" + name + "' needs a parameter, e.g. " + name +
                                    ":3");
    out.param = param;
    return out;
}

std::vector<double> parse_weights_csv(const std::string& text) {
    std::vector<double> out;
    std::stringstream stream(text);
    std::string item;
    while (std::getline(stream, item, ',')) {
        try {
            out.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw std::invalid_argument("bad weight '" + item + "'");
        }
    }
    if (out.empty()) throw std::invalid_argument("empty --weights list");
    return out;
}

// Points-file jobs share this bundle; the tree backend loads separately.
template <class S>
struct Loaded {
    S space;
    std::vector<typename S::Point> points;
    std::vector<double> weights;  // empty means uniform
};

json load_points_json(const JobOptions& opt) {
    if (opt.points.empty()) throw std::invalid_argument("this space needs --points");
    const json doc = json::parse(io::read_file(opt.points));
    if (!doc.is_object() || !doc.contains("points"))
        throw std::invalid_argument("points file must be an object with a 'points' array");
    return doc;
}

// The space may come from --space, from the file's "space" field, or both in
// agreement.
std::string resolve_space_string(const JobOptions& opt, const json* doc) {
    std::string from_file;
    if (doc && doc->contains("space")) from_file = doc->at("space").get<std::string>();
    if (!opt.space.empty() && !from_file.empty() && opt.space != from_file)
        throw std::invalid_argument("--space '" + opt.space + "' conflicts with file space '" +
                                    from_file + "'");
    if (!opt.space.empty()) return opt.space;
    if (!from_file.empty()) return from_file;
    throw std::invalid_argument("no space given (use --space or a 'space' field)");
}

template <class S>
Loaded<S> load_points(S space, const json& doc, const JobOptions& opt) {
    Loaded<S> out{std::move(space), {}, {}};
    for (const json& j : doc.at("points")) out.points.push_back(io::decode_point(out.space, j));
    if (out.points.empty()) throw std::invalid_argument("points file holds no points");
    if (!opt.weights.empty())
        out.weights = parse_weights_csv(opt.weights);
    else if (doc.contains("weights"))
        out.weights = doc.at("weights").get<std::vector<double>>();
    if (!out.weights.empty() && out.weights.size() != out.points.size())
        throw std::invalid_argument("weights count does not match point count");
    return out;
}

Loaded<BhvSpace> load_trees(const JobOptions& opt) {
    if (opt.trees.empty()) throw std::invalid_argument("the bhv space needs --trees");
    const std::string text = io::read_file(opt.trees);
    std::vector<std::string> lines;
    std::stringstream stream(text);
    std::string line;
    while (std::getline(stream, line)) {
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
        if (!line.empty()) lines.push_back(line);
    }
    if (lines.empty()) throw std::invalid_argument("trees file holds no trees");
    auto [first, taxa] = parse_newick(lines[0]);
    if (!opt.space.empty()) {
        const auto desc = parse_space_descriptor(opt.space);
        if (desc.kind != SpaceDescriptor::Kind::bhv)
            throw std::invalid_argument("--trees requires --space bhv");
        if (desc.param != 0 && desc.param != taxa.size())
            throw std::invalid_argument("--space bhv:" + std::to_string(desc.param) +
                                        " conflicts with " + std::to_string(taxa.size()) +
                                        " taxa in the trees file");
    }
    Loaded<BhvSpace> out{BhvSpace{TaxonSet(taxa.labels())}, {}, {}};
    out.points.push_back(std::move(first));
    for (std::size_t i = 1; i < lines.size(); ++i)
        out.points.push_back(parse_newick(lines[i], out.space.taxa()));
    if (!opt.weights.empty()) {
        out.weights = parse_weights_csv(opt.weights);
        if (out.weights.size() != out.points.size())
            throw std::invalid_argument("weights count does not match tree count");
    }
    return out;
}

template <class S>
AnchorConfiguration<S> make_config(const Loaded<S>& loaded) {
    if (loaded.weights.empty()) return AnchorConfiguration<S>::uniform(loaded.points);
    return AnchorConfiguration<S>(loaded.points, loaded.weights);
}

template <class S>
json result_document(const S& space, const IterationTrace<S>& trace, const JobOptions& opt,
                     double objective) {
    json doc;
    doc["point"] = io::encode_point(space, trace.final_point);
    doc["objective"] = objective;
    doc["iterations"] = trace.total_steps;
    doc["stop_reason"] = std::string(to_string(trace.stop_reason));
    doc["seed"] = trace.seed;
    doc["schedule"] = json{{"form", "C/(k+1)"}, {"C", opt.lambda_c}};
    return doc;
}

template <class S>
std::string trace_csv(const IterationTrace<S>& trace) {
    std::string out = "step,component_index,lambda,t_coefficient,objective,distance_moved\n";
    for (std::size_t i = 0; i < trace.steps.size(); ++i) {
        const auto& s = trace.steps[i];
        out += std::to_string(i + 1);
        out += ',';
        out += std::to_string(s.component);
        out += ',';
        out += io::format_double(s.lambda);
        out += ',';
        out += io::format_double(s.t);
        out += ',';
        out += io::format_double(trace.objectives[i + 1]);
        out += ',';
        out += io::format_double(s.moved);
        out += '\n';
    }
    return out;
}

template <class S>
int finish_job(const S& space, const IterationTrace<S>& trace, const JobOptions& opt,
               double objective) {
    const json doc = result_document(space, trace, opt, objective);
    std::printf("point: %s\n", doc["point"].dump().c_str());
    std::printf("objective: %s\n", io::format_double(objective).c_str());
    std::printf("iterations: %zu, stop: %s\n", trace.total_steps,
                std::string(to_string(trace.stop_reason)).c_str());
    if (!opt.out.empty()) io::write_file_atomic(opt.out, doc.dump(2) + "\n");
    if (!opt.trace.empty()) io::write_file_atomic(opt.trace, trace_csv(trace));
    const bool budget_fail = opt.tol > 0.0 && trace.stop_reason == StopReason::budget;
    return budget_fail ? kExitBudget : kExitOk;
}

template <class S>
int run_average(const S& space, const Loaded<S>& loaded, const JobOptions& opt, bool median) {
    const auto data = make_config(loaded);
    RunConfig config;
    config.budget = opt.algo == "cyclic" ? opt.cycles : opt.steps;
    config.movement_tolerance = opt.tol;
    config.seed = opt.seed;
    config.schedule = StepSchedule::harmonic(opt.lambda_c);
    if (median) {
        if (opt.algo == "lln")
            throw std::invalid_argument("--algo lln applies to means only");
        const auto [point, trace] = geometric_median(
            space, data, opt.algo == "cyclic" ? MedianVariant::cyclic : MedianVariant::random,
            config);
        return finish_job(space, trace, opt, trace.final_objective);
    }
    const MeanVariant variant = opt.algo == "cyclic"   ? MeanVariant::cyclic
                                : opt.algo == "random" ? MeanVariant::random
                                                       : MeanVariant::lln;
    if (variant == MeanVariant::lln) config.budget = opt.steps;
    const auto [point, trace] = frechet_mean(space, data, variant, config);
    return finish_job(space, trace, opt, trace.final_objective);
}

template <class S>
int run_geodesic(const S& space, const Loaded<S>& loaded, const JobOptions& opt) {
    if (loaded.points.size() != 2)
        throw std::invalid_argument("geodesic needs exactly two inputs");
    if (!(opt.t >= 0.0 && opt.t <= 1.0))
        throw std::invalid_argument("--t must lie in [0,1]");
    const auto point = space.geodesic(loaded.points[0], loaded.points[1], opt.t);
    json doc;
    doc["point"] = io::encode_point(space, point);
    doc["t"] = opt.t;
    doc["distance"] = space.distance(loaded.points[0], loaded.points[1]);
    std::printf("point: %s\n", doc["point"].dump().c_str());
    std::printf("distance: %s\n", io::format_double(doc["distance"].get<double>()).c_str());
    if (!opt.out.empty()) io::write_file_atomic(opt.out, doc.dump(2) + "\n");
    return kExitOk;
}

template <class S>
int run_flow(const S& space, const Loaded<S>& loaded, const JobOptions& opt) {
    if (loaded.points.size() < 2)
        throw std::invalid_argument("flow needs a start point plus at least one anchor");
    const auto x0 = loaded.points.front();
    std::vector<typename S::Point> anchors(loaded.points.begin() + 1, loaded.points.end());
    std::vector<double> weights = loaded.weights;
    if (!weights.empty() && weights.size() == loaded.points.size())
        throw std::invalid_argument("flow weights cover the anchors only (first point starts)");
    const auto data = weights.empty()
                          ? AnchorConfiguration<S>::uniform(anchors)
                          : AnchorConfiguration<S>(anchors, weights);
    if (!(opt.t >= 0.0)) throw std::invalid_argument("--t must be nonnegative");
    const auto components = mean_components(data);
    const auto point =
        lie_trotter_kato<S>(space, components, x0, opt.t, std::max<std::size_t>(1, opt.k));
    json doc;
    doc["point"] = io::encode_point(space, point);
    doc["objective"] = objective_value<S>(space, components, point);
    doc["t"] = opt.t;
    doc["k"] = opt.k;
    std::printf("point: %s\n", doc["point"].dump().c_str());
    std::printf("objective: %s\n", io::format_double(doc["objective"].get<double>()).c_str());
    if (!opt.out.empty()) io::write_file_atomic(opt.out, doc.dump(2) + "\n");
    return kExitOk;
}

template <class S>
int run_feasibility(const S& space, std::optional<Loaded<S>> start, const JobOptions& opt) {
    if (opt.centers.empty()) throw std::invalid_argument("feasibility needs --center/--radius");
    if (opt.centers.size() != opt.radii.size())
        throw std::invalid_argument("--center and --radius counts differ");
    std::vector<GeodesicBall<S>> balls;
    std::vector<Component<S>> components;
    for (std::size_t i = 0; i < opt.centers.size(); ++i) {
        json j;
        if constexpr (std::is_same_v<S, BhvSpace>)
            j = json(opt.centers[i]);
        else
            j = json::parse(opt.centers[i]);
        GeodesicBall<S> ball{io::decode_point(space, j), opt.radii[i]};
        if (ball.radius < 0.0) throw std::invalid_argument("--radius must be nonnegative");
        components.push_back(indicator_component<S>(ball));
        balls.push_back(std::move(ball));
    }
    const auto x0 = start && !start->points.empty() ? start->points.front() : balls[0].center;
    RunConfig config;
    config.budget = opt.algo == "cyclic" ? opt.cycles : opt.steps;
    config.movement_tolerance = opt.tol;
    config.seed = opt.seed;
    config.schedule = StepSchedule::harmonic(opt.lambda_c);
    const auto trace = opt.algo == "cyclic"
                           ? ppa_cyclic<S>(space, components, x0, config)
                           : ppa_random<S>(space, components, x0, config);
    double violation = 0.0;
    for (const auto& ball : balls)
        violation = std::max(
            violation, space.distance(trace.final_point, ball.center) - ball.radius);
    violation = std::max(violation, 0.0);
    // the result's objective reports the worst distance to any of the sets
    return finish_job(space, trace, opt, violation);
}

int run_verify();

int dispatch(const std::string& command, const JobOptions& opt) {
    if (command == "verify") return run_verify();

    const bool wants_trees = !opt.trees.empty() ||
                             (!opt.space.empty() && opt.space.rfind("bhv", 0) == 0);
    if (wants_trees) {
        std::optional<Loaded<BhvSpace>> loaded;
        if (command == "feasibility" && opt.trees.empty()) {
            // centers alone define the taxa
            if (opt.centers.empty())
                throw std::invalid_argument("feasibility needs --center/--radius");
            auto [tree, taxa] = parse_newick(opt.centers[0]);
            BhvSpace space{TaxonSet(taxa.labels())};
            return run_feasibility(space, std::optional<Loaded<BhvSpace>>{}, opt);
        }
        auto job = load_trees(opt);
        if (command == "mean" || command == "lln")
            return run_average(job.space, job, opt, false);
        if (command == "median") return run_average(job.space, job, opt, true);
        if (command == "geodesic") return run_geodesic(job.space, job, opt);
        if (command == "flow") return run_flow(job.space, job, opt);
        if (command == "feasibility")
            return run_feasibility(job.space, std::optional<Loaded<BhvSpace>>{std::move(job)},
                                   opt);
        throw std::invalid_argument("unknown subcommand " + command);
    }

    json doc;
    std::string space_text;
    if (command == "feasibility" && opt.points.empty()) {
        space_text = resolve_space_string(opt, nullptr);
    } else {
        doc = load_points_json(opt);
        space_text = resolve_space_string(opt, &doc);
    }
    const auto desc = parse_space_descriptor(space_text);
    const auto with_space = [&](auto space) -> int {
        using S = decltype(space);
        std::optional<Loaded<S>> loaded;
        if (!doc.is_null()) loaded = load_points(std::move(space), doc, opt);
        if (command == "feasibility") {
            const S& ref = loaded ? loaded->space : space;
            return run_feasibility(ref, std::move(loaded), opt);
        }
        if (!loaded) throw std::invalid_argument("this subcommand needs --points");
        if (command == "mean" || command == "lln")
            return run_average(loaded->space, *loaded, opt, false);
        if (command == "median") return run_average(loaded->space, *loaded, opt, true);
        if (command == "geodesic") return run_geodesic(loaded->space, *loaded, opt);
        if (command == "flow") return run_flow(loaded->space, *loaded, opt);
        throw std::invalid_argument("unknown subcommand " + command);
    };
    switch (desc.kind) {
        case SpaceDescriptor::Kind::euclidean:
            return with_space(EuclideanSpace(desc.param));
        case SpaceDescriptor::Kind::spider:
            return with_space(SpiderSpace(static_cast<int>(desc.param)));
        case SpaceDescriptor::Kind::spd:
            return with_space(SpdSpace(desc.param));
        case SpaceDescriptor::Kind::bhv:
            throw std::invalid_argument("bhv jobs read --trees, not --points");
    }
    return kExitInput;
}

// ---------------------------------------------------------------------------
// verify: oracle battery

void print_report(const OracleReport& report) {
    std::printf("%-4s %-46s oracle=%-12.6g solver=%-12.6g gap=%-10.3g tol=%-8.2g\n",
                report.pass ? "ok" : "FAIL", report.instance.c_str(), report.oracle_value,
                report.solver_value, report.absolute_gap, report.tolerance);
}

int run_verify() {
    std::vector<OracleReport> reports;
    std::mt19937_64 engine(2024);
    auto uniform = [&engine](double lo, double hi) {
        return std::uniform_real_distribution<double>(lo, hi)(engine);
    };

    {  // solver mean against the arithmetic mean, random instances
        double worst = 0.0;
        for (int i = 0; i < 20; ++i) {
            const std::size_t dim = 1 + static_cast<std::size_t>(engine() % 5);
            const std::size_t n = 2 + static_cast<std::size_t>(engine() % 9);
            EuclideanSpace space(dim);
            std::vector<std::vector<double>> anchors;
            for (std::size_t j = 0; j < n; ++j) {
                std::vector<double> a(dim);
                for (double& c : a) c = uniform(-1.0, 1.0);
                anchors.push_back(std::move(a));
            }
            const auto data = AnchorConfiguration<EuclideanSpace>::uniform(anchors);
            RunConfig config;
            config.record_trace = false;
            const auto [mean, trace] = frechet_mean(space, data, MeanVariant::cyclic, config);
            worst = std::max(worst, space.distance(mean, euclidean_mean_closed_form(data)));
        }
        reports.push_back(
            compare_report("euclidean mean vs closed form (20 runs, worst)", 0.0, worst, 1e-3));
    }

    {  // solver median against the fixed-point oracle
        EuclideanSpace plane(2);
        const auto tri = AnchorConfiguration<EuclideanSpace>::uniform({{0, 0}, {1, 0}, {0, 1}});
        RunConfig config;
        config.record_trace = false;
        const auto [median, trace] = geometric_median(plane, tri, MedianVariant::cyclic, config);
        const double fermat = (3.0 - std::sqrt(3.0)) / 6.0;
        reports.push_back(compare_report("fermat point median, coordinate error", 0.0,
                                         std::max(std::abs(median[0] - fermat),
                                                  std::abs(median[1] - fermat)),
                                         1e-3));
        double worst = 0.0;
        for (int i = 0; i < 20; ++i) {
            const std::size_t n = 3 + static_cast<std::size_t>(engine() % 5);
            std::vector<std::vector<double>> anchors;
            for (std::size_t j = 0; j < n; ++j)
                anchors.push_back({uniform(-1.0, 1.0), uniform(-1.0, 1.0)});
            const auto data = AnchorConfiguration<EuclideanSpace>::uniform(anchors);
            const auto [med, tr] = geometric_median(plane, data, MedianVariant::cyclic, config);
            const auto oracle = weiszfeld_median(data);
            const auto comps = median_components(data);
            worst = std::max(worst,
                             std::abs(objective_value<EuclideanSpace>(plane, comps, med) -
                                      objective_value<EuclideanSpace>(plane, comps, oracle)));
        }
        reports.push_back(compare_report(
            "euclidean median objective vs fixed-point oracle (20 runs)", 0.0, worst, 1e-3));
    }

    {  // spider counterexample against the per-ray line search
        SpiderSpace spider(3);
        const auto data =
            AnchorConfiguration<SpiderSpace>::uniform({{0, 1.0}, {1, 1.0}, {2, 5.0}});
        RunConfig config;
        config.budget = 5000;
        config.schedule = StepSchedule::harmonic(1.0);
        config.record_trace = false;
        const auto [mean, trace] = frechet_mean(spider, data, MeanVariant::cyclic, config);
        const auto oracle = spider_1d_search(spider, data, 2);
        reports.push_back(compare_report("spider mean vs line search, distance", 0.0,
                                         spider.distance(mean, oracle.point), 1e-2));
        const auto [median, mtrace] =
            geometric_median(spider, data, MedianVariant::cyclic, config);
        const auto moracle = spider_1d_search(spider, data, 1);
        const auto comps = median_components(data);
        reports.push_back(compare_report(
            "spider median objective vs line search",
            moracle.objective, objective_value<SpiderSpace>(spider, comps, median), 1e-3));
    }

    {  // closed-form prox coefficients against golden-section minimization
        EuclideanSpace line(1);
        SpiderSpace spider(3);
        double worst = 0.0;
        for (int i = 0; i < 100; ++i) {
            const double lambda = std::exp(uniform(-2.0, 1.5));
            const double w = uniform(0.1, 1.0);
            {
                const std::vector<double> anchor{uniform(-2.0, 2.0)}, x{uniform(-2.0, 2.0)};
                for (const auto& comp :
                     {squared_distance_component<EuclideanSpace>(anchor, w),
                      distance_component<EuclideanSpace>(anchor, w)}) {
                    const auto oracle = prox_1d_oracle(line, comp, anchor, lambda, x);
                    worst = std::max(
                        worst, line.distance(comp.prox(line, lambda, x).point, oracle));
                }
            }
            {
                const SpiderPoint anchor{static_cast<int>(engine() % 3), uniform(0.0, 2.0)};
                const SpiderPoint x{static_cast<int>(engine() % 3), uniform(0.0, 2.0)};
                for (const auto& comp : {squared_distance_component<SpiderSpace>(anchor, w),
                                         distance_component<SpiderSpace>(anchor, w)}) {
                    const auto oracle = prox_1d_oracle(spider, comp, anchor, lambda, x);
                    worst = std::max(
                        worst, spider.distance(comp.prox(spider, lambda, x).point, oracle));
                }
            }
        }
        reports.push_back(compare_report(
            "prox coefficients vs golden-section oracle (400 cases)", 0.0, worst, 1e-6));
    }

    {  // inductive-mean error rate
        EuclideanSpace line(1);
        const auto pair = AnchorConfiguration<EuclideanSpace>::uniform({{0.0}, {1.0}});
        const std::vector<std::size_t> checkpoints{10, 100};
        for (auto& row : lln_rate_report(line, pair, {0.5}, 300, checkpoints))
            reports.push_back(std::move(row));
    }

    bool all_pass = true;
    for (const auto& report : reports) {
        print_report(report);
        all_pass = all_pass && report.pass;
    }
    std::printf("%s\n", all_pass ? "verify: all oracles within tolerance"
                                 : "verify: ORACLE GAP EXCEEDED");
    return all_pass ? kExitOk : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"means, medians, and proximal splitting in nonpositively curved spaces"};
    app.require_subcommand(1);
    JobOptions opt;

    const auto add_common = [&opt](CLI::App* sub, bool with_algo) {
        sub->add_option("--space", opt.space, "space descriptor: euclidean:D, spider:R, spd:N, bhv");
        sub->add_option("--points", opt.points, "points file (json)");
        sub->add_option("--trees", opt.trees, "trees file (newick, one per line)");
        sub->add_option("--weights", opt.weights, "comma-separated positive weights");
        if (with_algo)
            sub->add_option("--algo", opt.algo, "cyclic | random | lln")
                ->check(CLI::IsMember({"cyclic", "random", "lln"}));
        sub->add_option("--cycles", opt.cycles, "cycle budget (cyclic order)");
        sub->add_option("--steps", opt.steps, "step budget (random order / estimator)");
        sub->add_option("--lambda-c", opt.lambda_c, "C in the step schedule C/(k+1)");
        sub->add_option("--tol", opt.tol, "movement tolerance for early stopping");
        sub->add_option("--seed", opt.seed, "seed for the randomized variants");
        sub->add_option("--out", opt.out, "result document path (json)");
        sub->add_option("--trace", opt.trace, "trace file path (csv)");
    };

    auto* mean = app.add_subcommand("mean", "weighted mean of the input points");
    add_common(mean, true);
    auto* median = app.add_subcommand("median", "weighted median of the input points");
    add_common(median, true);
    auto* lln = app.add_subcommand("lln", "inductive mean estimator (sampling by weight)");
    add_common(lln, false);
    auto* feas = app.add_subcommand("feasibility", "cyclic/random projections onto balls");
    add_common(feas, true);
    feas->add_option("--center", opt.centers, "ball center (encoded point), repeatable")
        ->expected(1)
        ->allow_extra_args(false)
        ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
    feas->add_option("--radius", opt.radii, "ball radius, repeatable")
        ->expected(1)
        ->allow_extra_args(false)
        ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
    auto* flow = app.add_subcommand("flow",
                                    "resolvent-sweep flow approximation; first point starts");
    add_common(flow, false);
    flow->add_option("--t", opt.t, "flow time");
    flow->add_option("--k", opt.k, "number of resolvent sweeps");
    auto* geo = app.add_subcommand("geodesic", "point on the geodesic between two inputs");
    add_common(geo, false);
    geo->add_option("--t", opt.t, "geodesic parameter in [0,1]");
    auto* verify = app.add_subcommand("verify", "run the oracle battery");
    (void)verify;

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        app.exit(e);
        return kExitInput;
    }

    const std::string command = app.get_subcommands().front()->get_name();
    if (command == "lln") opt.algo = "lln";
    try {
        return dispatch(command, opt);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitInput;
    }
}
