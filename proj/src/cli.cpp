#include "ppinv/cli.hpp"

#include <algorithm>
#include <fstream>
#include <ostream>
#include <stdexcept>

#include <CLI11.hpp>

#include "ppinv/families.hpp"
#include "ppinv/verify.hpp"

namespace ppinv {

namespace {

ParamMap parse_params(const std::vector<std::string>& bindings) {
  ParamMap params;
  for (const std::string& binding : bindings) {
    size_t eq = binding.find('=');
    if (eq == std::string::npos || eq == 0)
      throw std::invalid_argument("parameter binding '" + binding + "' is not name=value");
    std::string name = binding.substr(0, eq);
    std::string value = binding.substr(eq + 1);
    uint64_t parsed = 0;
    try {
      size_t used = 0;
      parsed = std::stoull(value, &used);
      if (used != value.size()) throw std::invalid_argument(value);
    } catch (const std::exception&) {
      throw std::invalid_argument("parameter '" + name + "' needs an integer value, got '" +
                                  value + "'");
    }
    if (params.count(name))
      throw std::invalid_argument("parameter '" + name + "' bound twice");
    params[name] = parsed;
  }
  return params;
}

bool family_admissible(const FamilyDescriptor& desc, uint64_t p, uint32_t m) {
  if (desc.char_requirement == 1 && p == 2) return false;
  if (desc.char_requirement > 1 && p != desc.char_requirement) return false;
  return m >= desc.min_m;
}

std::vector<std::string> expand_family_ids(const std::string& requested, uint64_t p,
                                           uint32_t m) {
  std::vector<std::string> ids;
  if (requested == "all") {
    for (const FamilyDescriptor& desc : catalog()) {
      if (!family_admissible(desc, p, m)) continue;
      if (desc.variants.empty()) {
        ids.push_back(desc.id);
      } else {
        for (const std::string& v : desc.variants) ids.push_back(desc.id + v);
      }
    }
  } else {
    ids.push_back(requested);
  }
  return ids;
}

int run_list_families(std::ostream& out) {
  for (const FamilyDescriptor& desc : catalog()) {
    std::string ids = desc.id;
    if (!desc.variants.empty()) {
      ids.clear();
      for (const std::string& v : desc.variants) {
        if (!ids.empty()) ids += '/';
        ids += desc.id + v;
      }
    }
    out << ids << "  [" << to_string(desc.condition_kind) << "]  " << desc.summary << "\n";
  }
  return 0;
}

int run_field(uint64_t p, uint32_t m, std::ostream& out) {
  FieldRef ctx = mk_field(p, 2 * m);
  out << ctx->descriptor_json() << "\n";
  return 0;
}

int run_verify(const std::string& family, uint64_t p, uint32_t m,
               const std::vector<std::string>& bindings, std::ostream& out) {
  FieldRef ctx = mk_field(p, 2 * m);
  VerificationReport report = verify_params(family, ctx, m, parse_params(bindings));
  out << report_to_json(report).dump(2) << "\n";
  return report.theorem_upheld ? 0 : 1;
}

int run_sweep_cmd(const std::string& family, uint64_t p, uint32_t m, bool exhaustive,
                  bool sampled, uint64_t samples, uint64_t seed, const std::string& out_path,
                  const std::string& format, std::ostream& out) {
  std::vector<VerificationReport> reports;
  for (const std::string& id : expand_family_ids(family, p, m)) {
    SweepPlan plan;
    plan.family_id = id;
    plan.fields = {{p, m}};
    if (exhaustive) {
      plan.strategy = SweepStrategy::exhaustive;
    } else if (sampled) {
      plan.strategy = SweepStrategy::sampled;
      plan.sample_count = samples;
      plan.sample_seed = seed;
    }
    auto part = run_sweep(plan);
    reports.insert(reports.end(), part.begin(), part.end());
  }

  std::string document = format == "csv" ? reports_to_csv(reports) : reports_to_json(reports);
  std::ofstream file(out_path, std::ios::binary);
  if (!file) throw std::invalid_argument("cannot open output file '" + out_path + "'");
  file << document;
  if (!file) throw std::invalid_argument("failed writing output file '" + out_path + "'");
  file.close();

  uint64_t failed = std::count_if(reports.begin(), reports.end(),
                                  [](const VerificationReport& r) { return !r.theorem_upheld; });
  out << reports.size() << " reports written to " << out_path << "; "
      << (reports.size() - failed) << " upheld, " << failed << " violations\n";
  return failed == 0 ? 0 : 1;
}

}  // namespace

int cli_run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"permutation-polynomial family toolkit over GF(p^(2m))"};
  app.require_subcommand(1);

  CLI::App* list_cmd = app.add_subcommand("list-families", "Print the family catalog");

  uint64_t p = 0;
  uint32_t m = 0;
  CLI::App* field_cmd =
      app.add_subcommand("field", "Print the field descriptor for GF(p^(2m))");
  field_cmd->add_option("--p", p, "Characteristic (prime)")->required();
  field_cmd->add_option("--m", m, "Subfield degree m (the field is GF(p^(2m)))")->required();

  std::string family;
  std::vector<std::string> bindings;
  CLI::App* verify_cmd =
      app.add_subcommand("verify", "Verify one parameter tuple against its theorem");
  verify_cmd->add_option("--family", family, "Family id, e.g. F02 or F01a")->required();
  verify_cmd->add_option("--p", p, "Characteristic (prime)")->required();
  verify_cmd->add_option("--m", m, "Subfield degree m")->required();
  verify_cmd->add_option("--param", bindings,
                         "Parameter binding name=value (value is an element encoding "
                         "or an integer, repeatable)");

  bool exhaustive = false;
  uint64_t samples = 200;
  uint64_t seed = 0;
  std::string out_path;
  std::string format = "json";
  CLI::App* sweep_cmd =
      app.add_subcommand("sweep", "Verify a parameter grid and write the reports");
  sweep_cmd->add_option("--family", family, "Family id or 'all'")->required();
  sweep_cmd->add_option("--p", p, "Characteristic (prime)")->required();
  sweep_cmd->add_option("--m", m, "Subfield degree m")->required();
  CLI::Option* ex_opt =
      sweep_cmd->add_flag("--exhaustive", exhaustive, "Force the exhaustive strategy");
  CLI::Option* samples_opt =
      sweep_cmd->add_option("--samples", samples, "Sample this many tuples per family");
  CLI::Option* seed_opt = sweep_cmd->add_option("--seed", seed, "Seed for sampled draws");
  ex_opt->excludes(samples_opt);
  ex_opt->excludes(seed_opt);
  sweep_cmd->add_option("--out", out_path, "Report file path")->required();
  sweep_cmd->add_option("--format", format, "Report format")
      ->check(CLI::IsMember({"json", "csv"}));

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return 2;
  }

  try {
    if (list_cmd->parsed()) return run_list_families(out);
    if (field_cmd->parsed()) return run_field(p, m, out);
    if (verify_cmd->parsed()) return run_verify(family, p, m, bindings, out);
    if (sweep_cmd->parsed())
      return run_sweep_cmd(family, p, m, exhaustive, samples_opt->count() > 0 || seed_opt->count() > 0,
                           samples, seed, out_path, format, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  err << "error: no command given\n" << app.help();
  return 2;
}

}  // namespace ppinv
