#include "phipp/harness.hpp"

#include <cmath>

#include <json.hpp>

#include "phipp/datasets.hpp"
#include "phipp/errors.hpp"
#include "phipp/io.hpp"

namespace phipp {

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json direction_to_json(const Eigen::VectorXd& v) {
    ordered_json a = ordered_json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
    return a;
}

ordered_json report_to_json(const TestReport& r) {
    ordered_json j;
    j["step_index"] = r.step_index;
    j["direction"] = direction_to_json(r.direction);
    j["direction_whitened"] = direction_to_json(r.direction_whitened);
    j["divergence_estimate"] = r.divergence_estimate;
    j["statistic"] = r.statistic;
    j["zscore"] = r.zscore;
    j["threshold"] = r.threshold;
    j["accepted"] = r.accepted;
    j["p_value"] = r.p_value;
    j["mode"] = to_string(r.mode);
    j["n_used"] = r.n_used;
    j["optimizer_degraded"] = r.optimizer_degraded;
    return j;
}

ordered_json config_to_json(const RunConfig& c) {
    ordered_json j;
    j["divergence"] = c.divergence;
    j["alpha"] = c.alpha;
    j["q_alpha_mode"] = to_string(c.q_mode);
    if (c.nu)
        j["nu"] = *c.nu;
    else
        j["nu"] = nullptr;
    j["annealing"] = {{"proposals", c.annealing.annealing_proposals},
                      {"cooling", c.annealing.cooling},
                      {"proposal_step", c.annealing.proposal_step},
                      {"temperature_probes", c.annealing.temperature_probes},
                      {"nelder_mead_iters", c.annealing.nelder_mead_iters}};
    j["seed"] = c.seed;
    j["mode"] = to_string(c.mode);
    j["grid_resolution"] = c.grid_resolution;
    return j;
}

ordered_json conventions_json() {
    ordered_json j;
    j["exponential_parameter"] = "rate";
    j["gumbel_parameters"] = "location and scale, maximum convention";
    j["clayton_generator"] =
        "standard form (u^-theta - 1)/theta; the literal x^theta - 1 does not yield a copula";
    return j;
}

CommandResult render(const RunConfig& config, const Eigen::MatrixXd& data,
                     const std::vector<std::string>& columns, const PursuitOutcome& outcome,
                     const std::string& command) {
    const CopulaFactorization fac = copula_factorization(outcome.reports);

    ordered_json j;
    j["command"] = command;
    j["config"] = config_to_json(config);
    j["conventions"] = conventions_json();
    j["input"] = {{"rows", data.rows()}, {"columns", columns}};
    j["steps"] = ordered_json::array();
    for (const auto& r : outcome.reports) j["steps"].push_back(report_to_json(r));
    j["verdict"] = outcome.verdict;
    j["flat_copula"] = fac.flat;
    ordered_json blocks = ordered_json::array();
    for (const auto& [lo, hi] : fac.blocks) blocks.push_back({{"first", lo}, {"last", hi}});
    j["copula_blocks"] = blocks;
    ordered_json dirs = ordered_json::array();
    for (const auto& r : outcome.reports) dirs.push_back(direction_to_json(r.direction));
    j["directions_original"] = dirs;

    CommandResult result;
    if (config.grid) {
        const int d = static_cast<int>(data.cols());
        Eigen::MatrixXd basis(d, d);
        for (int k = 0; k < d && k < static_cast<int>(outcome.reports.size()); ++k)
            basis.col(k) = outcome.reports[k].direction;
        const CopulaGrid grid =
            empirical_copula_density_grid(data, basis, config.grid_resolution);
        result.grids.emplace_back("copula_grid_discovered", copula_grid_csv(grid));
        j["grids"] = ordered_json::array({"copula_grid_discovered"});
    }
    result.report_json = j.dump(2) + "\n";
    return result;
}

}  // namespace

void RunConfig::validate() const {
    PhiSpec::parse(divergence);
    if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("config: alpha must lie in (0,1)");
    if (nu && !(*nu > 0.0 && *nu < 0.25)) throw DomainError("config: nu must lie in (0, 1/4)");
    if (grid_resolution < 2) throw DomainError("config: grid resolution must be >= 2");
    if (annealing.annealing_proposals < 0 || annealing.nelder_mead_iters < 0)
        throw DomainError("config: optimizer budgets must be nonnegative");
    if (!(annealing.cooling > 0.0 && annealing.cooling <= 1.0))
        throw DomainError("config: cooling factor must lie in (0,1]");
    if (sim_n < 20) throw DomainError("config: simulation size must be >= 20");
}

double gumbel_quantile(double u, double location, double scale) {
    if (!(u > 0.0 && u < 1.0)) throw DomainError("gumbel_quantile: u must be in (0,1)");
    return location - scale * std::log(-std::log(u));
}

double exponential_quantile(double u, double rate) {
    if (!(u >= 0.0 && u < 1.0)) throw DomainError("exponential_quantile: u must be in [0,1)");
    return -std::log1p(-u) / rate;
}

Eigen::MatrixXd simulate_coupled_margins(int n, math::Rng& rng) {
    const CopulaFamily cop = CopulaFamily::gaussian(0.5);
    const Eigen::MatrixXd uv = cop.sample(n, rng);
    Eigen::MatrixXd out(n, 2);
    for (int i = 0; i < n; ++i) {
        out(i, 0) = gumbel_quantile(uv(i, 0), -1.0, 1.0);
        out(i, 1) = exponential_quantile(uv(i, 1), 2.0);
    }
    return out;
}

Eigen::MatrixXd simulate_independent_margins(int n, math::Rng& rng) {
    std::uniform_real_distribution<double> unif(std::nextafter(0.0, 1.0), 1.0);
    Eigen::MatrixXd out(n, 2);
    for (int i = 0; i < n; ++i) {
        out(i, 0) = gumbel_quantile(unif(rng), -1.0, 1.0);
        out(i, 1) = exponential_quantile(unif(rng), 2.0);
    }
    return out;
}

CommandResult cmd_test(const Eigen::MatrixXd& data, const RunConfig& config) {
    config.validate();
    if (data.rows() < 20) throw IngestError("test: need at least 20 data rows");
    math::Rng rng(config.seed);
    const PursuitOutcome outcome =
        run_pursuit(data, config.mode, config.phi(), config.settings(), rng);
    std::vector<std::string> columns;
    for (Eigen::Index j = 0; j < data.cols(); ++j)
        columns.push_back("x" + std::to_string(j + 1));
    return render(config, data, columns, outcome, "test");
}

CommandResult cmd_test_csv(const std::string& csv_text, const RunConfig& config) {
    config.validate();
    const CsvTable table = read_csv(csv_text);
    if (table.data.rows() < 20) throw IngestError("test: need at least 20 data rows");
    math::Rng rng(config.seed);
    const PursuitOutcome outcome =
        run_pursuit(table.data, config.mode, config.phi(), config.settings(), rng);
    return render(config, table.data, table.column_names, outcome, "test");
}

CommandResult cmd_sim(const std::string& which, RunConfig config) {
    config.validate();
    math::Rng rng(config.seed);
    Eigen::MatrixXd data;
    if (which == "sim1") {
        config.mode = TestMode::Elliptical;
        data = simulate_coupled_margins(config.sim_n, rng);
    } else if (which == "sim2") {
        config.mode = TestMode::Independence;
        data = simulate_independent_margins(config.sim_n, rng);
    } else {
        throw DomainError("sim: expected 'sim1' or 'sim2', got '" + which + "'");
    }
    const PursuitOutcome outcome =
        run_pursuit(data, config.mode, config.phi(), config.settings(), rng);
    return render(config, data, {"x1", "x2"}, outcome, which);
}

CommandResult cmd_realdata(RunConfig config) {
    config.divergence = "kl";
    config.mode = TestMode::Elliptical;
    config.validate();

    const Eigen::MatrixXd prices = datasets::stock_prices();
    const Eigen::MatrixXd logp = prices.array().log().matrix();

    math::Rng rng(config.seed);
    const PursuitOutcome outcome =
        run_pursuit(logp, config.mode, config.phi(), config.settings(), rng);

    RunConfig echo = config;
    echo.grid = false;  // grids rendered explicitly below
    CommandResult result = render(echo, logp, {"log_renault", "log_peugeot"}, outcome,
                                  "realdata");

    const int d = 2;
    Eigen::MatrixXd canonical = Eigen::MatrixXd::Identity(d, d);
    Eigen::MatrixXd discovered(d, d);
    for (int k = 0; k < d; ++k) discovered.col(k) = outcome.reports[k].direction;
    result.grids.emplace_back(
        "copula_grid_canonical",
        copula_grid_csv(empirical_copula_density_grid(logp, canonical, config.grid_resolution)));
    result.grids.emplace_back(
        "copula_grid_discovered",
        copula_grid_csv(empirical_copula_density_grid(logp, discovered, config.grid_resolution)));
    return result;
}

}  // namespace phipp
