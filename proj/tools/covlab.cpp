#include <CLI11.hpp>

#include <iostream>
#include <map>
#include <string>

#include "covlab/cli_runner.hpp"
#include "covlab/errors.hpp"
#include "covlab/io.hpp"

namespace {

struct CommonFlags {
    std::string config_path;
    std::string seed, seeds, out, alpha, model;
    std::vector<std::string> sets;  // free-form key=value overrides
};

void add_common(CLI::App* cmd, CommonFlags& f) {
    cmd->add_option("--config", f.config_path, "JSON config file");
    cmd->add_option("--seed", f.seed, "base seed (u64)");
    cmd->add_option("--seeds", f.seeds, "number of replicated seeds");
    cmd->add_option("--out", f.out, "output directory");
    cmd->add_option("--alpha", f.alpha, "cover radius exponent");
    cmd->add_option("--model", f.model, "model variant (uniform|cantor|bernoulli|example|empirical)");
    cmd->add_option("--set", f.sets, "extra overrides as field=value (e.g. cover.j_max=12)");
}

std::map<std::string, std::string> overrides_of(const CommonFlags& f) {
    std::map<std::string, std::string> ov;
    if (!f.seed.empty()) ov["seed"] = f.seed;
    if (!f.seeds.empty()) ov["seeds"] = f.seeds;
    if (!f.out.empty()) ov["out"] = f.out;
    if (!f.alpha.empty()) ov["alpha"] = f.alpha;
    if (!f.model.empty()) ov["model"] = f.model;
    for (const auto& kv : f.sets) {
        auto eq = kv.find('=');
        if (eq == std::string::npos) throw covlab::ConfigError(kv, "expected field=value");
        ov[kv.substr(0, eq)] = kv.substr(eq + 1);
    }
    return ov;
}

int run(const std::string& command, const CommonFlags& flags, const std::string& hull_input) {
    std::string json_text;
    if (!flags.config_path.empty()) json_text = covlab::read_file(flags.config_path);
    covlab::ExperimentConfig cfg = covlab::load_config(json_text, overrides_of(flags));
    auto files = covlab::run_command(command, cfg, hull_input);
    for (const auto& name : files) std::cout << cfg.out_dir << "/" << name << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"random covering set laboratory"};
    app.require_subcommand(1);

    CommonFlags flags;
    std::string hull_input;

    auto* sim = app.add_subcommand("simulate-cover", "generate one cover and its window tables");
    add_common(sim, flags);
    auto* est = app.add_subcommand("estimate-dim", "multi-seed box-dimension estimate");
    add_common(est, flags);
    auto* spec = app.add_subcommand("spectrum", "coarse spectrum counts and G curve");
    add_common(spec, flags);
    auto* hull = app.add_subcommand("hull", "hull/tilde transform of a curve CSV");
    add_common(hull, flags);
    hull->add_option("--input", hull_input, "input curve CSV (s,value)")->required();
    auto* tree = app.add_subcommand("tree-certify", "grow a fractal tree and certify a dimension bound");
    add_common(tree, flags);
    auto* everify = app.add_subcommand("example-verify", "composite-measure verification battery");
    add_common(everify, flags);

    CLI11_PARSE(app, argc, argv);

    std::string command;
    for (auto* sub : {sim, est, spec, hull, tree, everify})
        if (sub->parsed()) command = sub->get_name();

    try {
        return run(command, flags, hull_input);
    } catch (const covlab::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const covlab::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
