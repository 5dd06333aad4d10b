#include <algorithm>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "safecritic/data.hpp"
#include "safecritic/errors.hpp"
#include "safecritic/experiment.hpp"
#include "safecritic/svg.hpp"

namespace {

using namespace sc;

int cmd_train(const std::string& config_path) {
    const ExperimentConfig cfg = ExperimentConfig::from_file(config_path);
    const EvalResult result = run_experiment(cfg);
    std::cout << "trained; aggregate mADE=" << result.aggregate.made
              << " mFDE=" << result.aggregate.mfde
              << " NC=" << result.aggregate.nc_total
              << " diversity=" << result.aggregate.diversity << "\n"
              << "artifacts in " << cfg.out_dir << "\n";
    return 0;
}

int cmd_eval(const std::string& checkpoint, const std::string& data,
             const std::string& config_path, std::size_t k, double epsilon,
             std::uint64_t seed, const std::string& out_csv) {
    ExperimentConfig cfg = config_path.empty()
                               ? ExperimentConfig{}
                               : ExperimentConfig::from_file(config_path);
    cfg.k_eval = k;
    cfg.train.epsilon_m = epsilon;
    cfg.eval_seed = seed;
    const std::vector<Scene> scenes = load_trajnet(data);
    const EvalResult result = eval_checkpoint(cfg, checkpoint, scenes, out_csv);
    result.write_csv(std::cout);
    return 0;
}

int cmd_simulate(const std::string& preset, const std::string& out,
                 std::size_t num_scenes, std::uint64_t seed) {
    SimConfig sim = preset_config(preset);
    if (num_scenes > 0) sim.num_scenes = num_scenes;
    sim.seed = seed;
    const SimResult res = simulate(sim);
    save_trajnet(res.scenes, out);
    std::cout << "wrote " << res.scenes.size() << " scenes to " << out << "\n";
    return 0;
}

int cmd_ablate(const std::string& config_path, const std::string& toggle) {
    ExperimentConfig cfg = ExperimentConfig::from_file(config_path);
    if (toggle == "asr") {
        cfg.model.use_asr = false;
    } else if (toggle == "critic") {
        cfg.train.lambda_critic = 0.0;
    } else {
        throw ConfigError("ablate: toggle must be `asr` or `critic`, got: " + toggle);
    }
    cfg.out_dir += "_ablate_" + toggle;
    const EvalResult result = run_experiment(cfg);
    std::cout << "ablation " << toggle << ": aggregate mADE=" << result.aggregate.made
              << " mFDE=" << result.aggregate.mfde
              << " NC=" << result.aggregate.nc_total << "\n"
              << "artifacts in " << cfg.out_dir << "\n";
    return 0;
}

// Bar chart of per-scene mADE/mFDE from a results.csv written by eval/train.
int cmd_plot(const std::string& result_path, const std::string& out_dir) {
    std::ifstream in(result_path);
    if (!in) throw DataError("cannot open result file: " + result_path);
    std::string line;
    if (!std::getline(in, line) || line.rfind("scene_id,", 0) != 0)
        throw DataError("not a results CSV: " + result_path);
    struct Row {
        std::string id;
        double made, mfde;
    };
    std::vector<Row> rows;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::vector<std::string> fields;
        std::string f;
        while (std::getline(ls, f, ',')) fields.push_back(f);
        if (fields.size() < 5) throw DataError("malformed results row: " + line);
        try {
            rows.push_back(Row{fields[0], std::stod(fields[3]), std::stod(fields[4])});
        } catch (const std::exception&) {
            throw DataError("malformed number in results row: " + line);
        }
    }
    if (rows.empty()) throw DataError("results file has no rows");

    double max_v = 1e-9;
    for (const Row& r : rows) max_v = std::max({max_v, r.made, r.mfde});
    const double bar_w = 14.0, gap = 8.0, h = 160.0;
    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\""
        << rows.size() * (2 * bar_w + gap) + 40 << "\" height=\"" << h + 40 << "\">\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const double x = 20 + i * (2 * bar_w + gap);
        const double h1 = h * rows[i].made / max_v, h2 = h * rows[i].mfde / max_v;
        svg << "<rect x=\"" << x << "\" y=\"" << 20 + h - h1 << "\" width=\"" << bar_w
            << "\" height=\"" << h1 << "\" fill=\"#1e88e5\"/>\n";
        svg << "<rect x=\"" << x + bar_w << "\" y=\"" << 20 + h - h2 << "\" width=\""
            << bar_w << "\" height=\"" << h2 << "\" fill=\"#e53935\"/>\n";
    }
    svg << "<text x=\"20\" y=\"14\" font-family=\"monospace\" font-size=\"11\">"
           "mADE (blue) / mFDE (red), scale max="
        << max_v << "</text>\n</svg>\n";
    std::filesystem::create_directories(out_dir);
    write_text_file(out_dir + "/errors.svg", svg.str());
    std::cout << "wrote " << out_dir << "/errors.svg\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"SafeCritic trajectory predictor"};
    app.require_subcommand(1);

    std::string config_path, checkpoint, data, preset = "crossing", out, result_path;
    std::string toggle, out_csv;
    std::size_t k = 20, num_scenes = 0;
    double epsilon = 0.10;
    std::uint64_t seed = 1234;

    auto* train = app.add_subcommand("train", "Train a model from a config file");
    train->add_option("--config", config_path, "key = value config file")->required();

    auto* eval = app.add_subcommand("eval", "Evaluate a checkpoint on a dataset");
    eval->add_option("--checkpoint", checkpoint)->required();
    eval->add_option("--data", data, "TrajNet TSV file")->required();
    eval->add_option("--config", config_path, "model config (defaults if omitted)");
    eval->add_option("--k", k, "samples per scene");
    eval->add_option("--epsilon", epsilon, "collision threshold, meters");
    eval->add_option("--seed", seed, "evaluation noise seed");
    eval->add_option("--out", out_csv, "also write results CSV here");

    auto* sim = app.add_subcommand("simulate", "Generate synthetic scenes");
    sim->add_option("--preset", preset, "crossing | crossing-unsafe | corridor");
    sim->add_option("--out", out, "output TrajNet file")->required();
    sim->add_option("--scenes", num_scenes, "number of scenes (preset default if 0)");
    sim->add_option("--seed", seed);

    auto* ablate = app.add_subcommand("ablate", "Re-run a config with one piece removed");
    ablate->add_option("--config", config_path)->required();
    ablate->add_option("--toggle", toggle, "asr | critic")->required();

    auto* plot = app.add_subcommand("plot", "Render charts from a results CSV");
    plot->add_option("--result", result_path)->required();
    plot->add_option("--out", out, "output directory")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (train->parsed()) return cmd_train(config_path);
        if (eval->parsed())
            return cmd_eval(checkpoint, data, config_path, k, epsilon, seed, out_csv);
        if (sim->parsed()) return cmd_simulate(preset, out, num_scenes, seed);
        if (ablate->parsed()) return cmd_ablate(config_path, toggle);
        if (plot->parsed()) return cmd_plot(result_path, out);
    } catch (const sc::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const sc::DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 3;
    } catch (const sc::NumericError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
