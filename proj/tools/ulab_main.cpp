#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI/CLI.hpp>

#include "ulab/errors.hpp"
#include "ulab/lab.hpp"

namespace {

int emit(const ulab::lab::Report& rep, const std::string& out_path) {
	const std::string text = rep.to_json().dump(2);
	if (out_path.empty()) {
		std::cout << text << "\n";
	} else {
		std::ofstream out(out_path);
		if (!out) {
			std::cerr << "error: cannot write " << out_path << "\n";
			return 2;
		}
		out << text << "\n";
	}
	return rep.pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
	CLI::App app{"verification lab for operator-valued harmonic analysis"};
	app.require_subcommand(1);

	std::string scenario_path, out_path;
	auto* run_cmd = app.add_subcommand("run", "run a scenario file and print its report");
	run_cmd->add_option("scenario", scenario_path, "path to a scenario JSON file")->required();
	run_cmd->add_option("--out", out_path, "write the report here instead of stdout");

	std::string kind, group, bundle, example, world, verify_out;
	std::int64_t dim = 0, trials = 0, seed = 0, window = 0;
	double tol = 0.0, eps = 0.0;
	auto* verify_cmd = app.add_subcommand("verify", "run one scenario kind with defaults");
	verify_cmd->add_option("kind", kind, "scenario kind, see list-fixtures")->required();
	auto* o_group = verify_cmd->add_option("--group", group, "finite abelian group, e.g. 4,2");
	auto* o_dim = verify_cmd->add_option("--dim", dim, "operator dimension");
	auto* o_bundle = verify_cmd->add_option("--bundle", bundle, "bundle fixture id");
	auto* o_example = verify_cmd->add_option("--example", example, "counterexample instance id");
	auto* o_world = verify_cmd->add_option("--world", world, "finite | zshift | both");
	auto* o_trials = verify_cmd->add_option("--trials", trials, "number of random trials");
	auto* o_seed = verify_cmd->add_option("--seed", seed, "root seed");
	auto* o_tol = verify_cmd->add_option("--tol", tol, "main tolerance");
	auto* o_eps = verify_cmd->add_option("--eps", eps, "requested integration accuracy");
	auto* o_window = verify_cmd->add_option("--window", window, "index window half-width");
	verify_cmd->add_option("--out", verify_out, "write the report here instead of stdout");

	std::string fixtures_dir;
	auto* list_cmd = app.add_subcommand("list-fixtures", "list fixtures and scenario kinds");
	list_cmd->add_option("--fixtures-dir", fixtures_dir, "also scan this directory for user scenarios");

	std::string demo_example = "basis-over-n";
	double demo_eps = 0.0;
	auto* demo_cmd = app.add_subcommand("demo", "narrated single-example runs");
	auto* demo_ucond = demo_cmd->add_subcommand("unconditional", "run one counterexample instance");
	demo_ucond->add_option("--example", demo_example, "instance id, see list-fixtures");
	auto* o_demo_eps = demo_ucond->add_option("--eps", demo_eps, "requested accuracy");

	CLI11_PARSE(app, argc, argv);

	try {
		if (*run_cmd)
			return emit(ulab::lab::run(ulab::lab::Scenario::from_file(scenario_path)), out_path);

		if (*verify_cmd) {
			ulab::lab::json j;
			j["kind"] = kind;
			if (o_group->count()) j["group"] = group;
			if (o_dim->count()) j["dim"] = dim;
			if (o_bundle->count()) j["bundle"] = bundle;
			if (o_example->count()) j["example"] = example;
			if (o_world->count()) j["world"] = world;
			if (o_trials->count()) j["trials"] = trials;
			if (o_seed->count()) j["seed"] = seed;
			if (o_tol->count()) j["tol"] = tol;
			if (o_eps->count()) j["eps"] = eps;
			if (o_window->count()) j["window"] = window;
			return emit(ulab::lab::run(ulab::lab::Scenario::from_json(j)), verify_out);
		}

		if (*list_cmd) {
			std::cout << ulab::lab::fixture_listing(fixtures_dir);
			return 0;
		}

		if (*demo_cmd) {
			if (!*demo_ucond) {
				std::cerr << "error: demo needs the 'unconditional' subcommand\n";
				return 2;
			}
			ulab::lab::json j;
			j["kind"] = "unconditional";
			j["id"] = "demo-" + demo_example;
			j["example"] = demo_example;
			if (o_demo_eps->count()) j["eps"] = demo_eps;
			const auto rep = ulab::lab::run(ulab::lab::Scenario::from_json(j));
			for (const auto& c : rep.checks)
				std::cout << (c.pass ? "[pass] " : "[FAIL] ") << c.name << ": " << c.lhs_summary
				          << " vs " << c.rhs_summary << " (certificate " << c.certificate_status
				          << ")\n";
			std::cout << (rep.pass ? "demo passed" : "demo failed") << "\n";
			return rep.pass ? 0 : 1;
		}
	} catch (const ulab::ValidationError& e) {
		std::cerr << "validation error: " << e.what() << "\n";
		return 2;
	} catch (const ulab::Error& e) {
		std::cerr << "error: " << e.what() << "\n";
		return 2;
	}
	return 2;
}
