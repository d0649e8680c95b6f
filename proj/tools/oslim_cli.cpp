/*
 * Copyright 2026 The oslim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Batch front-end. Every command reads JSON jobs, writes one deterministic
// JSON report (--out or stdout) and one human-readable line on stderr.
// Exit codes: 0 = Yes/Positive/pass, 1 = No/NotPositive/fail, 2 = Unknown,
// 3 = input error.

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "oslim/oslim.hpp"

namespace {

using namespace oslim;
using jsonio::json;

constexpr int kExitYes = 0;
constexpr int kExitNo = 1;
constexpr int kExitUnknown = 2;
constexpr int kExitInputError = 3;

struct Options {
  double eps = 1e-9;
  std::vector<double> ladder = default_ladder();
  std::uint64_t seed = 0;
  // Stage costs grow with the tower dimension, so the fallback depth stays
  // small; jobs and --depth override it.
  std::size_t depth = 5;
  std::size_t level = 1;
  std::size_t samples = 50;
  std::size_t horizon = 0;
  std::size_t restarts = 50;
  std::size_t iterations = 30;
  std::size_t l_max = 0;
  std::size_t m_max = 0;
  std::vector<std::size_t> gamma;
  std::string in;
  std::string out;
  std::string systems;
  std::string mode = "minmax";
};

Tolerance tolerance(const Options& o) { return Tolerance{o.eps}; }

SequenceOptions sequence_options(const Options& o) {
  SequenceOptions s;
  s.depth = o.depth;
  s.seed = o.seed;
  s.tol = tolerance(o);
  return s;
}

SearchBudget search_budget(const Options& o) {
  SearchBudget b;
  b.l_max = o.l_max;
  b.m_max = o.m_max;
  b.restarts = o.restarts;
  b.iterations = o.iterations;
  b.seed = o.seed;
  return b;
}

void emit(const Options& o, json report) {
  if (o.out.empty())
    std::cout << jsonio::dump_canonical(report);
  else
    jsonio::write_json_file(o.out, report);
}

void note(const std::string& line) { std::cerr << line << "\n"; }

int exit_for(ConeStatus s) {
  switch (s) {
    case ConeStatus::positive: return kExitYes;
    case ConeStatus::not_positive: return kExitNo;
    case ConeStatus::unknown: return kExitUnknown;
  }
  return kExitUnknown;
}

int exit_for(CpStatus s) {
  switch (s) {
    case CpStatus::ucp: return kExitYes;
    case CpStatus::cp_not_unital:
    case CpStatus::not_cp: return kExitNo;
    case CpStatus::unknown_up_to_level: return kExitUnknown;
  }
  return kExitUnknown;
}

int exit_for(LimitStatus s) {
  switch (s) {
    case LimitStatus::yes: return kExitYes;
    case LimitStatus::no: return kExitNo;
    case LimitStatus::unknown: return kExitUnknown;
  }
  return kExitUnknown;
}

jsonio::SystemRegistry load_registry(const Options& o) {
  if (o.systems.empty()) return {};
  return jsonio::registry_from_json(jsonio::load_json_file(o.systems), "systems", tolerance(o));
}

// ---- commands -------------------------------------------------------------

int cmd_validate_system(const Options& o) {
  const json input = jsonio::load_json_file(o.in);
  json entries = json::array();
  auto describe = [](const ConcreteOperatorSystem& s) {
    return json{{"name", s.name()},
                {"ambient_dim", s.ambient_dim()},
                {"dim", s.dim()},
                {"full_algebra", s.is_full_algebra()}};
  };
  if (input.is_object() && input.contains("systems")) {
    for (const auto& [name, s] : jsonio::registry_from_json(input, "systems", tolerance(o)))
      entries.push_back(describe(s));
  } else {
    entries.push_back(describe(jsonio::system_from_json(input, "system", tolerance(o))));
  }
  emit(o, json{{"command", "validate-system"}, {"status", "pass"}, {"systems", entries}});
  note("validate-system: " + std::to_string(entries.size()) + " system(s) valid");
  return kExitYes;
}

int cmd_check_ucp(const Options& o) {
  const LinearMap f =
      jsonio::map_from_json(jsonio::load_json_file(o.in), load_registry(o), "map", tolerance(o));
  const CpVerdict v = is_ucp(f, o.level, o.samples, o.seed, tolerance(o));
  emit(o, json{{"command", "check-ucp"}, {"verdict", jsonio::verdict_to_json(v)}});
  note(std::string("check-ucp: ") + cp_status_name(v.status));
  return exit_for(v.status);
}

int cmd_check_order_mono(const Options& o) {
  const LinearMap f =
      jsonio::map_from_json(jsonio::load_json_file(o.in), load_registry(o), "map", tolerance(o));
  const CpVerdict v = is_complete_order_mono(f, o.level, o.samples, o.seed, tolerance(o));
  emit(o, json{{"command", "check-order-mono"}, {"verdict", jsonio::verdict_to_json(v)}});
  note(std::string("check-order-mono: ") + cp_status_name(v.status) + " up to level " +
       std::to_string(v.checked_level));
  return exit_for(v.status);
}

TensorElement tensor_input(const Options& o, const json& job) {
  const auto reg = load_registry(o);
  const ConcreteOperatorSystem left =
      jsonio::resolve_system(jsonio::field(job, "left", "job"), reg, "job.left", tolerance(o));
  const ConcreteOperatorSystem right =
      jsonio::resolve_system(jsonio::field(job, "right", "job"), reg, "job.right", tolerance(o));
  const std::size_t level = jsonio::size_field(job, "level", "job");
  const ComplexMatrix w =
      jsonio::matrix_from_json(jsonio::field(job, "matrix", "job"), "job.matrix");
  return make_tensor_element(left, right, level, w, tolerance(o));
}

int cmd_tensor_min(const Options& o) {
  const TensorElement u = tensor_input(o, jsonio::load_json_file(o.in));
  const ConeVerdict v = min_positive(u, tolerance(o));
  emit(o, json{{"command", "tensor-min"}, {"verdict", jsonio::verdict_to_json(v)}});
  note(std::string("tensor-min: ") + cone_status_name(v.status));
  return exit_for(v.status);
}

int cmd_tensor_max_cert(const Options& o) {
  const TensorElement u = tensor_input(o, jsonio::load_json_file(o.in));
  try {
    const auto cert = max_certificate_search(u, o.ladder, search_budget(o), tolerance(o));
    if (cert) {
      emit(o, json{{"command", "tensor-max-cert"},
                   {"found", true},
                   {"epsilon", cert->epsilon},
                   {"certificate", jsonio::certificate_to_json(*cert)}});
      note("tensor-max-cert: certificate found at epsilon " + std::to_string(cert->epsilon));
      return kExitYes;
    }
  } catch (const error& e) {
    if (e.code() != errc::necessary_condition_failed) throw;
    emit(o, json{{"command", "tensor-max-cert"}, {"found", false}, {"status", "NotPositive"}});
    note("tensor-max-cert: element is not min-positive, hence not max-positive");
    return kExitNo;
  }
  emit(o, json{{"command", "tensor-max-cert"}, {"found", false}, {"status", "Unknown"}});
  note("tensor-max-cert: search budget exhausted");
  return kExitUnknown;
}

InductiveSequence sequence_input(const Options& o, const json& job, const char* key) {
  if (job.is_object() && job.contains(key))
    return jsonio::sequence_from_json(job.at(key), sequence_options(o),
                                      std::string("job.") + key, tolerance(o));
  return jsonio::sequence_from_json(job, sequence_options(o), "job", tolerance(o));
}

int cmd_limit_build(const Options& o) {
  const InductiveSequence seq = sequence_input(o, jsonio::load_json_file(o.in), "sequence");
  json stages = json::array();
  json certs = json::array();
  for (std::size_t k = 1; k <= seq.depth(); ++k) {
    const ConcreteOperatorSystem& s = seq.system(k);
    stages.push_back(json{{"stage", k}, {"name", s.name()}, {"ambient_dim", s.ambient_dim()}});
    if (k < seq.depth()) {
      const StageCertificate& c = seq.certificate(k);
      certs.push_back(json{{"stage", k},
                           {"kind", stage_cert_kind_name(c.kind)},
                           {"order_mono", c.order_mono},
                           {"checked_level", c.checked_level}});
    }
  }
  emit(o, json{{"command", "limit-build"},
               {"depth", seq.depth()},
               {"inclusion", seq.inclusion_flag()},
               {"stages", stages},
               {"certificates", certs}});
  note("limit-build: " + std::to_string(seq.depth()) + " stage(s) materialized and certified");
  return kExitYes;
}

int cmd_limit_eq(const Options& o) {
  const json job = jsonio::load_json_file(o.in);
  const InductiveSequence seq = sequence_input(o, job, "sequence");
  const LimitElement a =
      jsonio::limit_element_from_json(jsonio::field(job, "first", "job"), "job.first");
  const LimitElement b =
      jsonio::limit_element_from_json(jsonio::field(job, "second", "job"), "job.second");
  const LimitVerdict v = limit_eq(seq, a, b, o.horizon, tolerance(o));
  emit(o, json{{"command", "limit-eq"}, {"verdict", jsonio::verdict_to_json(v)}});
  note(std::string("limit-eq: ") + limit_status_name(v.status) + " at stage " +
       std::to_string(v.stage_used));
  return exit_for(v.status);
}

int cmd_limit_pos(const Options& o) {
  const json job = jsonio::load_json_file(o.in);
  const InductiveSequence seq = sequence_input(o, job, "sequence");
  const LimitElement e =
      jsonio::limit_element_from_json(jsonio::field(job, "element", "job"), "job.element");
  const LimitVerdict v = limit_positive(seq, e, o.horizon, o.ladder, tolerance(o));
  emit(o, json{{"command", "limit-pos"}, {"verdict", jsonio::verdict_to_json(v)}});
  note(std::string("limit-pos: ") + limit_status_name(v.status) + " (epsilon " +
       std::to_string(v.epsilon_used) + ")");
  return exit_for(v.status);
}

std::vector<LinearMap> family_input(const json& job, const jsonio::SystemRegistry& reg,
                                    const Options& o) {
  const json& fam = jsonio::field(job, "family", "job");
  if (!fam.is_array() || fam.empty())
    fail(errc::invalid_argument, "job.family must be a non-empty array of maps");
  std::vector<LinearMap> maps;
  for (std::size_t i = 0; i < fam.size(); ++i)
    maps.push_back(jsonio::map_from_json(fam[i], reg, "job.family[" + std::to_string(i) + "]",
                                         tolerance(o)));
  return maps;
}

int cmd_universal_map(const Options& o) {
  const json job = jsonio::load_json_file(o.in);
  const InductiveSequence seq = sequence_input(o, job, "sequence");
  const auto reg = load_registry(o);
  const ConcreteOperatorSystem target =
      jsonio::resolve_system(jsonio::field(job, "target", "job"), reg, "job.target", tolerance(o));
  try {
    const UniversalMap psi(seq, target, family_input(job, reg, o), 0, tolerance(o));
    json report{{"command", "universal-map"}, {"status", "pass"}, {"depth", psi.depth()}};
    if (job.contains("evaluate")) {
      const LimitElement e = jsonio::limit_element_from_json(job.at("evaluate"), "job.evaluate");
      report["image"] = jsonio::matrix_to_json(psi(e, tolerance(o)));
    }
    emit(o, report);
    note("universal-map: compatible family of depth " + std::to_string(psi.depth()));
    return kExitYes;
  } catch (const error& e) {
    if (e.code() != errc::incompatible_family) throw;
    emit(o, json{{"command", "universal-map"}, {"status", "fail"}, {"reason", e.what()}});
    note(std::string("universal-map: ") + e.what());
    return kExitNo;
  }
}

int cmd_induced_map(const Options& o) {
  const json job = jsonio::load_json_file(o.in);
  const InductiveSequence src = sequence_input(o, job, "source");
  const InductiveSequence dst = sequence_input(o, job, "target");
  try {
    const InducedMap pi(src, dst, family_input(job, load_registry(o), o), 0, tolerance(o));
    json report{{"command", "induced-map"}, {"status", "pass"}, {"depth", pi.depth()}};
    if (job.contains("evaluate")) {
      const LimitElement e = jsonio::limit_element_from_json(job.at("evaluate"), "job.evaluate");
      report["image"] = jsonio::limit_element_to_json(pi(e, tolerance(o)));
    }
    emit(o, report);
    note("induced-map: commuting family of depth " + std::to_string(pi.depth()));
    return kExitYes;
  } catch (const error& e) {
    if (e.code() != errc::incompatible_square) throw;
    emit(o, json{{"command", "induced-map"}, {"status", "fail"}, {"reason", e.what()}});
    note(std::string("induced-map: ") + e.what());
    return kExitNo;
  }
}

int cmd_nuclearity_report(const Options& o) {
  const json job = jsonio::load_json_file(o.in);
  const std::string mode = job.contains("mode") ? jsonio::string_field(job, "mode", "job") : o.mode;
  NuclearityReport rep;
  if (mode == "minmax") {
    const auto reg = load_registry(o);
    const ConcreteOperatorSystem left =
        jsonio::resolve_system(jsonio::field(job, "left", "job"), reg, "job.left", tolerance(o));
    const ConcreteOperatorSystem right =
        jsonio::resolve_system(jsonio::field(job, "right", "job"), reg, "job.right", tolerance(o));
    rep = minmax_nuclearity_evidence(left, right, o.level, o.samples, search_budget(o), o.seed,
                                     tolerance(o));
  } else if (mode == "stage") {
    const InductiveSequence seq = sequence_input(o, job, "sequence");
    const ConcreteOperatorSystem factor = jsonio::resolve_system(
        jsonio::field(job, "factor", "job"), load_registry(o), "job.factor", tolerance(o));
    rep = tensor_limit_consistency(seq, factor, o.level, o.samples, o.seed, tolerance(o));
  } else {
    fail(errc::invalid_argument, "job.mode must be \"minmax\" or \"stage\"");
  }
  emit(o, json{{"command", "nuclearity-report"},
               {"mode", mode},
               {"report", jsonio::report_to_json(rep)}});
  note("nuclearity-report: forward " + std::to_string(rep.forward_pass) + "/" +
       std::to_string(rep.samples) + ", certificates " + std::to_string(rep.backward_found) +
       ", unknown " + std::to_string(rep.unknowns));
  if (rep.forward_pass != rep.samples) return kExitNo;
  return rep.unknowns == 0 ? kExitYes : kExitUnknown;
}

int cmd_uhf_demo(const Options& o) {
  if (o.gamma.empty()) fail(errc::invalid_argument, "--gamma is required");
  const GammaRule rule(o.gamma);
  SequenceOptions seq_opts = sequence_options(o);
  const UhfMonoReport rep = verify_order_mono_injection(rule, o.depth, o.level, o.samples, o.seed,
                                                        seq_opts, tolerance(o));
  json sizes = json::array();
  for (std::size_t k = 1; k <= o.depth; ++k) sizes.push_back(rule.factorial(k));
  emit(o, json{{"command", "uhf-demo"},
               {"gamma", o.gamma},
               {"sizes", sizes},
               {"report", jsonio::report_to_json(rep)}});
  note("uhf-demo: " + std::to_string(rep.checked) + " cells checked, " +
       std::to_string(rep.discrepancies) + " discrepancies, " + std::to_string(rep.skipped) +
       " skipped");
  return rep.passed() ? kExitYes : kExitNo;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"operator system tensor cones and inductive limits"};
  app.require_subcommand(1);
  Options o;

  auto add_common = [&o](CLI::App* c) {
    c->add_option("--eps", o.eps, "numerical tolerance");
    c->add_option("--ladder", o.ladder, "descending Archimedean ladder")->delimiter(',');
    c->add_option("--seed", o.seed, "RNG seed");
    c->add_option("--depth", o.depth, "sequence depth");
    c->add_option("--level", o.level, "matrix level");
    c->add_option("--samples", o.samples, "sample count");
    c->add_option("--horizon", o.horizon, "stage horizon (0 = default)");
    c->add_option("--out", o.out, "report output path (default stdout)");
    c->add_option("--systems", o.systems, "systems registry file");
    return c;
  };
  auto add_in = [](CLI::App* c, Options& opt) {
    c->add_option("--in", opt.in, "job input file")->required();
  };

  int (*handler)(const Options&) = nullptr;
  auto command = [&](const char* name, const char* help, int (*fn)(const Options&),
                     bool needs_in = true) {
    CLI::App* c = add_common(app.add_subcommand(name, help));
    if (needs_in) add_in(c, o);
    c->callback([&handler, fn]() { handler = fn; });
    return c;
  };

  command("validate-system", "validate system files", cmd_validate_system);
  command("check-ucp", "unital complete positivity of a map", cmd_check_ucp);
  command("check-order-mono", "complete order monomorphism sampling", cmd_check_order_mono);
  command("tensor-min", "min cone membership of a tensor element", cmd_tensor_min);
  CLI::App* cert = command("tensor-max-cert", "search a max cone certificate", cmd_tensor_max_cert);
  cert->add_option("--restarts", o.restarts, "search restarts");
  cert->add_option("--iterations", o.iterations, "refinement iterations per restart");
  cert->add_option("--l-max", o.l_max, "left factor level cap (0 = auto)");
  cert->add_option("--m-max", o.m_max, "right factor level cap (0 = auto)");
  command("limit-build", "materialize and certify a sequence", cmd_limit_build);
  command("limit-eq", "equality of two limit elements", cmd_limit_eq);
  command("limit-pos", "Archimedean positivity in the limit", cmd_limit_pos);
  command("universal-map", "factor a compatible family through the limit", cmd_universal_map);
  command("induced-map", "stagewise map between two limits", cmd_induced_map);
  CLI::App* nuc = command("nuclearity-report", "min/max agreement evidence", cmd_nuclearity_report);
  nuc->add_option("--restarts", o.restarts, "search restarts");
  nuc->add_option("--iterations", o.iterations, "refinement iterations per restart");
  CLI::App* demo = command("uhf-demo", "gamma tower order monomorphism demo", cmd_uhf_demo,
                           /*needs_in=*/false);
  demo->add_option("--gamma", o.gamma, "gamma rule entries")->delimiter(',')->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // Keep --help at 0 but fold usage errors into the input-error code.
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitInputError;
  }

  try {
    return handler ? handler(o) : kExitInputError;
  } catch (const error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  }
}
