#include <cstdint>
#include <functional>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "loglab/commands.hpp"
#include "loglab/errors.hpp"
#include "loglab/scenario.hpp"

namespace {

using loglab::Scenario;

// The vendored CLI11 build has no std::optional binding, so each option
// writes into heap storage and is copied into the Scenario only when it
// was actually given. That keeps "flag present" distinct from "default",
// which the config merge needs.
class ScenarioBinder {
public:
    explicit ScenarioBinder(CLI::App* cmd) : cmd_(cmd) {}

    void number(std::optional<double> Scenario::* field, const std::string& flag,
                const std::string& desc) {
        auto slot = std::make_shared<double>(0.0);
        CLI::Option* opt = cmd_->add_option(flag, *slot, desc);
        appliers_.push_back([field, slot, opt](Scenario& sc) {
            if (opt->count() > 0) sc.*field = *slot;
        });
    }

    void count(std::optional<std::uint64_t> Scenario::* field, const std::string& flag,
               const std::string& desc) {
        auto slot = std::make_shared<std::uint64_t>(0);
        CLI::Option* opt = cmd_->add_option(flag, *slot, desc);
        appliers_.push_back([field, slot, opt](Scenario& sc) {
            if (opt->count() > 0) sc.*field = *slot;
        });
    }

    void text(std::optional<std::string> Scenario::* field, const std::string& flag,
              const std::string& desc) {
        auto slot = std::make_shared<std::string>();
        CLI::Option* opt = cmd_->add_option(flag, *slot, desc);
        appliers_.push_back([field, slot, opt](Scenario& sc) {
            if (opt->count() > 0) sc.*field = *slot;
        });
    }

    void flag(bool Scenario::* field, const std::string& name, const std::string& desc) {
        CLI::Option* opt = cmd_->add_flag(name, desc);
        appliers_.push_back([field, opt](Scenario& sc) {
            if (opt->count() > 0) sc.*field = true;
        });
    }

    Scenario collect() const {
        Scenario sc;
        for (const auto& apply : appliers_) apply(sc);
        return sc;
    }

private:
    CLI::App* cmd_;
    std::vector<std::function<void(Scenario&)>> appliers_;
};

struct Command {
    CLI::App* app;
    std::shared_ptr<ScenarioBinder> binder;
    std::shared_ptr<std::string> config_path;
    int (*runner)(const Scenario&);
};

Command make_command(CLI::App& app, const std::string& name, const std::string& desc,
                     int (*runner)(const Scenario&)) {
    CLI::App* cmd = app.add_subcommand(name, desc);
    auto binder = std::make_shared<ScenarioBinder>(cmd);
    auto config = std::make_shared<std::string>();
    cmd->add_option("--config", *config,
                    "flat JSON file with the same keys as the long flags");
    return {cmd, binder, config, runner};
}

void add_model(ScenarioBinder& b) {
    b.number(&Scenario::r, "--r", "growth rate r");
    b.number(&Scenario::k, "--k", "carrying capacity k");
}

void add_harvest(ScenarioBinder& b) {
    b.number(&Scenario::effort, "--effort", "constant-effort rate e");
    b.number(&Scenario::quota, "--quota", "constant quota h");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"logistic growth and harvesting laboratory"};
    app.require_subcommand(1);

    std::vector<Command> commands;

    {
        Command c = make_command(app, "simulate",
                                 "integrate the harvested logistic model, CSV out",
                                 loglab::run_simulate);
        add_model(*c.binder);
        add_harvest(*c.binder);
        c.binder->number(&Scenario::x0, "--x0", "initial population");
        c.binder->number(&Scenario::t0, "--t0", "start time (default 0)");
        c.binder->number(&Scenario::t1, "--t1", "end time");
        c.binder->number(&Scenario::dt, "--dt", "integration step");
        c.binder->text(&Scenario::out_path, "--out", "CSV path (default stdout)");
        commands.push_back(std::move(c));
    }
    {
        Command c = make_command(app, "stability",
                                 "equilibria and their classification, JSON out",
                                 loglab::run_stability);
        add_model(*c.binder);
        add_harvest(*c.binder);
        c.binder->text(&Scenario::report_path, "--report", "JSON path (default stdout)");
        commands.push_back(std::move(c));
    }
    {
        Command c = make_command(app, "policy",
                                 "synthesize and simulate the harvest policy",
                                 loglab::run_policy);
        add_model(*c.binder);
        c.binder->number(&Scenario::x0, "--x0", "initial population");
        c.binder->number(&Scenario::t1, "--t1", "horizon b");
        c.binder->number(&Scenario::xb, "--xb", "terminal population floor");
        c.binder->number(&Scenario::umax, "--umax", "harvest rate bound");
        c.binder->number(&Scenario::dt, "--dt", "integration step");
        c.binder->flag(&Scenario::singular_from_start,
                       "--singular-from-start",
                       "hold the singular level from t=0 instead of steering to k/2");
        c.binder->flag(&Scenario::no_reanchor, "--no-reanchor",
                       "keep the integrated state at the singular switch (drift check)");
        c.binder->text(&Scenario::report_path, "--report", "JSON path (default stdout)");
        c.binder->text(&Scenario::out_path, "--out", "trajectory CSV path");
        commands.push_back(std::move(c));
    }
    {
        Command c = make_command(app, "discrete",
                                 "discrete-time maps: orbits and positivity scans",
                                 loglab::run_discrete);
        c.binder->text(&Scenario::map_name, "--map", "streipert | nsfd | euler");
        add_model(*c.binder);
        c.binder->number(&Scenario::x0, "--x0", "initial population");
        c.binder->count(&Scenario::n, "--n", "iteration count");
        c.binder->number(&Scenario::step, "--step", "map step (euler; experimental for nsfd)");
        c.binder->flag(&Scenario::compare, "--compare",
                       "include deviation from the continuous solution");
        c.binder->flag(&Scenario::scan, "--scan", "random positivity scan");
        c.binder->count(&Scenario::draws, "--draws", "scan sample count (default 100000)");
        c.binder->count(&Scenario::seed, "--seed",
                        "scan seed (default LOGLAB_SEED or 1729)");
        c.binder->number(&Scenario::rmax, "--rmax", "scan upper bound for r (default 10)");
        c.binder->number(&Scenario::kmax, "--kmax", "scan upper bound for k (default 10)");
        c.binder->number(&Scenario::x0frac, "--x0frac",
                         "scan upper bound for x0 as a multiple of k (default 3)");
        c.binder->text(&Scenario::report_path, "--report", "JSON path (default stdout)");
        c.binder->text(&Scenario::out_path, "--out", "orbit CSV path");
        commands.push_back(std::move(c));
    }

    try {
        app.parse(argc, argv);
        for (const Command& c : commands) {
            if (!c.app->parsed()) continue;
            Scenario base;
            if (!c.config_path->empty()) {
                base = loglab::load_config(*c.config_path);
            }
            const Scenario sc = loglab::merge_scenarios(base, c.binder->collect());
            return c.runner(sc);
        }
        std::cerr << "error: no command selected\n";
        return 2;
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const loglab::ValidationError& e) {
        std::cerr << "error: " << e.field() << ": " << e.what() << "\n";
        return 2;
    } catch (const loglab::UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const loglab::NumericalError& e) {
        std::cerr << "error: numerical failure at t=" << e.at_time() << ": " << e.what()
                  << "\n";
        return 3;
    } catch (const loglab::DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: invalid JSON: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
