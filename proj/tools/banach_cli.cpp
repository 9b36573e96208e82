#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "banach/error.hpp"
#include "banach/job.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) banach::fail(banach::ErrorKind::InvalidArgument, "--input: cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Banach density toolkit for discrete abelian groups"};
  app.require_subcommand(1, 1);

  std::string input;
  std::uint64_t seed = 0;
  std::int64_t cap = 0;
  std::string scope, suite;

  auto add_common = [&](CLI::App* sub, bool input_required) {
    auto* opt = sub->add_option("--input", input, "job file (JSON)");
    if (input_required) opt->required()->check(CLI::ExistingFile);
    sub->add_option("--seed", seed, "random seed for verifier suites");
    sub->add_option("--cap", cap, "largest finite group order for brute force")->check(CLI::Range(1, 20));
    sub->add_option("--scope", scope, "half-open box lo:hi[,lo:hi...]");
  };
  for (const char* name : {"density", "cover", "partition", "report"}) add_common(app.add_subcommand(name), true);
  auto* verify = app.add_subcommand("verify", "run property suites");
  add_common(verify, false);
  verify->add_option("--suite", suite, "suite name, or all");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  banach::JobOverrides over;
  const CLI::App* sub = app.get_subcommands().front();
  over.command = sub->get_name();
  if (sub->count("--seed")) over.seed = seed;
  if (sub->count("--cap")) over.cap = cap;
  if (sub->count("--scope")) over.scope = scope;
  if (sub->get_name() == "verify" && sub->count("--suite")) over.suite = suite;

  banach::JobOutcome outcome;
  try {
    over.max_scale = banach::max_scale_from_env();
    const banach::Json job = input.empty() ? banach::Json::object()
                                           : banach::parse_json_text(read_file(input), input);
    outcome = banach::run_job(job, over);
  } catch (const banach::Error& e) {
    outcome.document = {{"error", {{"kind", banach::to_string(e.kind())}, {"message", e.what()}}}};
    outcome.exit_code = 2;
  }
  if (outcome.document.contains("error"))
    std::cerr << "error: " << outcome.document["error"]["message"].get<std::string>() << "\n";
  std::cout << banach::render(outcome.document);
  return outcome.exit_code;
}
