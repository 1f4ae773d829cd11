#include "lodis/cli.hpp"

#include <fstream>
#include <sstream>

#include "lodis/mas.hpp"
#include "lodis/oracle.hpp"
#include "lodis/protocol.hpp"

namespace lodis::cli {

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SchemaError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

AnalysisReport run_analyze(const AnalyzeOptions& opts) {
  const std::string bytes = read_file(opts.input_path);
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(bytes);
  } catch (const nlohmann::json::parse_error& e) {
    throw SchemaError(std::string("JSON parse error: ") + e.what());
  }
  const StateSet raw = load_state_set(doc, opts.tol);
  const StateSet set = pad_to_square(raw);
  const SpectralStateSet spec = spectral_decompose(set, opts.tol);

  AnalysisReport rep;
  rep.input_path = opts.input_path;
  rep.digest = fnv1a64_hex(bytes);
  rep.d_A = raw.d_A;
  rep.d_B = raw.d_B;
  rep.d = set.d_A;
  rep.n = set.n();
  rep.tol = opts.tol;
  rep.seed = opts.seed;
  rep.trials = opts.trials;
  rep.simulated = opts.simulate && opts.trials > 0;

  for (Side side : opts.sides) {
    SideReport sr;
    sr.side = side;
    const PairOperators ops = build_pair_operators(spec, side);
    const TSpaces ts = build_tspaces(ops, opts.tol);
    sr.dim_T = ts.T.count();
    sr.dim_Tperp = ts.Tperp.count();
    sr.decision = decide(ts, opts.tol, opts.seed);
    if (sr.decision.verdict == Verdict::DistinguishableProjective) {
      sr.protocol = build_protocol(spec, *sr.decision.frame, side, opts.tol);
      if (rep.simulated)
        sr.simulation = simulate(spec, *sr.protocol, opts.trials, opts.seed);
    }
    rep.sides.push_back(std::move(sr));
  }
  rep.exit_code = exit_code_for(rep);
  return rep;
}

int exit_code_for(const AnalysisReport& report) {
  bool any_distinguishable = false;
  bool all_refuted = !report.sides.empty();
  for (const SideReport& sr : report.sides) {
    if (sr.decision.verdict == Verdict::DistinguishableProjective) any_distinguishable = true;
    if (sr.decision.verdict != Verdict::NotDistinguishable) all_refuted = false;
  }
  if (any_distinguishable) return kExitDistinguishable;
  if (all_refuted) return kExitRefuted;
  return kExitInconclusive;
}

SimulateResult run_simulate(const SimulateOptions& opts) {
  const StateSet set = pad_to_square(load_state_set_file(opts.input_path));
  const SpectralStateSet spec = spectral_decompose(set);

  nlohmann::json rep_doc;
  {
    std::ifstream in(opts.report_path);
    if (!in) throw SchemaError("cannot open " + opts.report_path);
    try {
      in >> rep_doc;
    } catch (const nlohmann::json::parse_error& e) {
      throw SchemaError(std::string("JSON parse error in report: ") + e.what());
    }
  }
  if (!rep_doc.contains("sides") || !rep_doc["sides"].is_object())
    throw SchemaError("report has no sides section");

  std::optional<Protocol> proto;
  std::string side_used;
  for (const char* name : {"A", "B"}) {
    if (opts.side && side_name(*opts.side) != std::string(name)) continue;
    if (!rep_doc["sides"].contains(name)) continue;
    const auto& js = rep_doc["sides"][name];
    if (!js.contains("protocol") || js["protocol"].is_null()) continue;
    proto = protocol_from_json(Json(js["protocol"]));
    side_used = name;
    break;
  }
  if (!proto) throw SchemaError("report contains no protocol for the requested side");

  const SimStats st = simulate(spec, *proto, opts.trials, opts.seed);

  SimulateResult res;
  Json out;
  out["tool"] = Json{{"name", kToolName}, {"version", kToolVersion}};
  Json params;
  params["input"] = opts.input_path;
  params["report"] = opts.report_path;
  params["side"] = side_used;
  params["trials"] = opts.trials;
  params["seed"] = opts.seed;
  out["params"] = std::move(params);
  out["simulation"] = to_json(st);
  res.output = std::move(out);
  res.exit_code = st.perfect() ? kExitDistinguishable : kExitRefuted;
  return res;
}

std::vector<std::pair<int, int>> parse_indices(const std::string& csv) {
  std::vector<std::pair<int, int>> out;
  std::stringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    const auto colon = tok.find(':');
    if (colon != std::string::npos) {
      out.emplace_back(std::stoi(tok.substr(0, colon)), std::stoi(tok.substr(colon + 1)));
    } else if (tok.size() == 2 && std::isdigit(tok[0]) && std::isdigit(tok[1])) {
      out.emplace_back(tok[0] - '0', tok[1] - '0');
    } else {
      throw SchemaError("cannot parse index pair '" + tok + "' (use nm or n:m)");
    }
  }
  if (out.empty()) throw SchemaError("no index pairs given");
  return out;
}

Json run_gen_fixture(int d, const std::string& indices_csv) {
  const auto indices = parse_indices(indices_csv);
  const StateSet set = gen_bell_set(d, indices);
  Json doc = state_set_to_json(set);
  load_state_set(doc);   // round-trip validation before anything is written
  return doc;
}

}  // namespace lodis::cli
