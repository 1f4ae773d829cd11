#include "lodis/report.hpp"

#include <cinttypes>
#include <cstdio>

namespace lodis {

namespace {

Json vector_to_json(const Vector& v) {
  auto arr = Json::array();
  for (int k = 0; k < v.size(); ++k)
    arr.push_back(Json::array({v(k).real(), v(k).imag()}));
  return arr;
}

Vector vector_from_json(const Json& j) {
  Vector v(j.size());
  for (std::size_t k = 0; k < j.size(); ++k)
    v(static_cast<int>(k)) = Complex(j[k][0].get<double>(), j[k][1].get<double>());
  return v;
}

void dump_value(const Json& j, std::string& out, int indent, int depth);

void dump_indent(std::string& out, int indent, int depth) {
  if (indent > 0) {
    out.push_back('\n');
    out.append(static_cast<std::size_t>(indent) * depth, ' ');
  }
}

void dump_value(const Json& j, std::string& out, int indent, int depth) {
  switch (j.type()) {
    case nlohmann::detail::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out.push_back('{');
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out.push_back(',');
        first = false;
        dump_indent(out, indent, depth + 1);
        out += Json(it.key()).dump();
        out += ": ";
        dump_value(it.value(), out, indent, depth + 1);
      }
      dump_indent(out, indent, depth);
      out.push_back('}');
      return;
    }
    case nlohmann::detail::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out.push_back('[');
      bool first = true;
      for (const auto& el : j) {
        if (!first) out.push_back(',');
        first = false;
        dump_indent(out, indent, depth + 1);
        dump_value(el, out, indent, depth + 1);
      }
      dump_indent(out, indent, depth);
      out.push_back(']');
      return;
    }
    case nlohmann::detail::value_t::number_float: {
      char buf[40];
      std::snprintf(buf, sizeof(buf), "%.17g", j.get<double>());
      out += buf;
      return;
    }
    case nlohmann::detail::value_t::number_integer: {
      char buf[32];
      std::snprintf(buf, sizeof(buf), "%" PRId64, j.get<std::int64_t>());
      out += buf;
      return;
    }
    case nlohmann::detail::value_t::number_unsigned: {
      char buf[32];
      std::snprintf(buf, sizeof(buf), "%" PRIu64, j.get<std::uint64_t>());
      out += buf;
      return;
    }
    default:
      out += j.dump();   // strings, booleans, null
  }
}

}  // namespace

Json to_json(const MasEvidence& ev) {
  Json j;
  j["branch"] = ev.branch;
  j["d"] = ev.d;
  j["dim_T"] = ev.dim_T;
  j["dim_Tperp"] = ev.dim_Tperp;
  j["t"] = ev.t;
  if (ev.dim_C >= 0) j["dim_C"] = ev.dim_C;
  if (ev.refutation_threshold >= 0) j["refutation_threshold"] = ev.refutation_threshold;
  if (ev.t_bound > 0) j["t_bound"] = ev.t_bound;
  if (!ev.omega_ranks.empty()) j["omega_ranks"] = ev.omega_ranks;
  if (ev.support_intersection_dim >= 0)
    j["support_intersection_dim"] = ev.support_intersection_dim;
  return j;
}

Json to_json(const MasDecision& dec) {
  Json j;
  j["verdict"] = verdict_tag(dec.verdict);
  j["reason"] = dec.reason;
  j["evidence"] = to_json(dec.evidence);
  return j;
}

Json to_json(const AliceMeasurement& m) {
  Json j;
  j["side"] = side_name(m.side);
  j["completeness_residual"] = m.completeness_residual;
  auto vecs = Json::array();
  for (const Vector& v : m.vectors) vecs.push_back(vector_to_json(v));
  j["vectors"] = std::move(vecs);
  return j;
}

Json to_json(const Protocol& p) {
  Json j;
  j["alice"] = to_json(p.alice);
  j["op_violation"] = p.op_violation;
  auto branches = Json::array();
  for (std::size_t k = 0; k < p.branches.size(); ++k) {
    Json jb;
    jb["outcome"] = static_cast<int>(k);
    jb["reachable"] = p.branches[k].reachable;
    auto blocks = Json::array();
    for (const BobBlock& blk : p.branches[k].blocks) {
      Json b;
      b["state"] = blk.state_index;
      auto basis = Json::array();
      for (const Vector& v : blk.basis) basis.push_back(vector_to_json(v));
      b["vectors"] = std::move(basis);
      blocks.push_back(std::move(b));
    }
    jb["blocks"] = std::move(blocks);
    branches.push_back(std::move(jb));
  }
  j["bob"] = std::move(branches);
  return j;
}

Json to_json(const SimStats& s) {
  Json j;
  j["trials"] = s.trials;
  j["successes"] = s.successes;
  j["success_rate"] = s.success_rate();
  j["seed"] = s.seed;
  j["per_state_trials"] = s.per_state_trials;
  j["per_state_successes"] = s.per_state_successes;
  j["per_outcome_counts"] = s.per_outcome_counts;
  if (s.trials == 0) j["note"] = "no trials";
  return j;
}

Json to_json(const SideReport& r) {
  Json j;
  j["dim_T"] = r.dim_T;
  j["dim_Tperp"] = r.dim_Tperp;
  j["verdict"] = verdict_tag(r.decision.verdict);
  j["reason"] = r.decision.reason;
  j["evidence"] = to_json(r.decision.evidence);
  j["protocol"] = r.protocol ? to_json(*r.protocol) : Json(nullptr);
  j["simulation"] = r.simulation ? to_json(*r.simulation) : Json(nullptr);
  return j;
}

Json to_json(const AnalysisReport& r) {
  Json j;
  j["tool"] = Json{{"name", kToolName}, {"version", kToolVersion}};
  Json in;
  in["path"] = r.input_path;
  in["digest"] = r.digest;
  in["dA"] = r.d_A;
  in["dB"] = r.d_B;
  in["d"] = r.d;
  in["n"] = r.n;
  j["input"] = std::move(in);
  Json params;
  auto sides = Json::array();
  for (const SideReport& s : r.sides) sides.push_back(side_name(s.side));
  params["sides"] = std::move(sides);
  params["tol"] = r.tol;
  params["seed"] = r.seed;
  params["trials"] = r.trials;
  params["simulate"] = r.simulated;
  j["params"] = std::move(params);
  Json js;
  for (const SideReport& s : r.sides) js[side_name(s.side)] = to_json(s);
  j["sides"] = std::move(js);
  j["exit_code"] = r.exit_code;
  return j;
}

Json to_json(const GenericityReport& r) {
  Json j;
  j["tool"] = Json{{"name", kToolName}, {"version", kToolVersion}};
  Json params;
  params["d"] = r.d;
  params["n"] = r.n;
  params["samples"] = r.samples;
  params["seed"] = r.seed;
  j["params"] = std::move(params);
  Json hist;
  for (const auto& [dim, count] : r.dim_histogram) hist[std::to_string(dim)] = count;
  j["dim_histogram"] = std::move(hist);
  if (!r.det_diagnostics.empty()) j["det_diagnostics"] = r.det_diagnostics;
  return j;
}

std::string dump_json(const Json& j, int indent) {
  std::string out;
  dump_value(j, out, indent, 0);
  out.push_back('\n');
  return out;
}

std::string fnv1a64_hex(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[32];
  std::snprintf(buf, sizeof(buf), "fnv1a64:%016" PRIx64, h);
  return buf;
}

Protocol protocol_from_json(const Json& j) {
  Protocol p;
  const Json& ja = j.at("alice");
  p.alice.side = ja.at("side").get<std::string>() == "B" ? Side::B : Side::A;
  p.alice.completeness_residual = ja.at("completeness_residual").get<double>();
  for (const auto& jv : ja.at("vectors")) p.alice.vectors.push_back(vector_from_json(jv));
  p.op_violation = j.at("op_violation").get<double>();
  for (const auto& jb : j.at("bob")) {
    BobBranch br;
    br.reachable = jb.at("reachable").get<bool>();
    for (const auto& blk : jb.at("blocks")) {
      BobBlock b;
      b.state_index = blk.at("state").get<int>();
      for (const auto& jv : blk.at("vectors")) b.basis.push_back(vector_from_json(jv));
      br.blocks.push_back(std::move(b));
    }
    p.branches.push_back(std::move(br));
  }
  return p;
}

}  // namespace lodis
