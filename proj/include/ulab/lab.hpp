#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace ulab::lab {

using json = nlohmann::ordered_json;

// Validated scenario: kind picks the module operation grid, params carry the
// kind-specific knobs (all optional, with pinned defaults).
struct Scenario {
	std::string id;
	std::string kind;
	json params = json::object();

	static Scenario from_json(const json& j);                // ValidationError on bad input
	static Scenario from_file(const std::string& path);      // ValidationError on bad file
};

struct CheckRecord {
	std::string name;
	std::string lhs_summary;
	std::string rhs_summary;
	double abs_err = 0.0;
	double tol = 0.0;
	bool pass = false;
	std::string certificate_status = "exact";  // proof | evidence | exact
};

struct Report {
	std::string id;
	std::string version = "0.1.0";
	std::uint64_t seed = 0;
	std::vector<CheckRecord> checks;
	bool pass = true;
	double wall_time_ms = 0.0;

	json to_json() const;
};

std::vector<std::string> scenario_kinds();
std::string params_schema(const std::string& kind);  // one-line flag summary

// Executes the scenario's check grid. Mathematical failures land in the
// report as failing checks; only malformed input throws (ValidationError).
Report run(const Scenario& scenario);

// Human-readable inventory: bundle fixtures, counterexample instances,
// scenario kinds with their parameter schemas, and, when a directory is
// given, user scenario files (malformed ones are listed with a warning).
std::string fixture_listing(const std::string& fixtures_dir = "");

}  // namespace ulab::lab
