#include "gasnet/report.h"

#include <cstdio>
#include <sstream>

#include "gasnet/network_io.h"
#include "json.hpp"

namespace gasnet {

using nlohmann::ordered_json;

namespace {

std::string name_of(const Network& net, NodeIndex j) {
  const auto& n = net.node(j).name;
  return n.empty() ? std::to_string(j) : n;
}

std::string edge_name(const Network& net, EdgeIndex i) {
  const auto& n = net.edge(i).name;
  return n.empty() ? std::to_string(i) : n;
}

std::string pad(const std::string& s, std::size_t width) {
  return s.size() >= width ? s + " " : s + std::string(width - s.size(), ' ');
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

ordered_json optional_number(const std::optional<double>& v) {
  return v ? ordered_json(*v) : ordered_json(nullptr);
}

std::string num(double v) { return format_volume(v); }

std::string optional_fixed(const std::optional<double>& v) { return v ? fixed4(*v) : "-"; }

ordered_json state_json(const Network& net, const OperationState& nom, const OperationState& s) {
  ordered_json nodes = ordered_json::array();
  for (NodeIndex j = 0; j < net.node_count(); ++j) {
    nodes.push_back({{"id", j},
                     {"name", net.node(j).name},
                     {"nominal_consumption", nom.consumption[j]},
                     {"consumption", s.consumption[j]},
                     {"outage", std::max(0.0, nom.consumption[j] - s.consumption[j])},
                     {"inlet", s.inlet[j]},
                     {"reservoir_inlet", s.reservoir_inlet[j]}});
  }
  ordered_json edges = ordered_json::array();
  for (EdgeIndex i = 0; i < net.edge_count(); ++i) {
    const auto& e = net.edge(i);
    edges.push_back({{"id", i},
                     {"name", e.name},
                     {"from", e.from},
                     {"to", e.to},
                     {"flow", s.flow[i]}});
  }
  return {{"mode", mode_name(s.mode)},
          {"total_consumption", s.total_consumption()},
          {"total_outage", std::max(0.0, nom.total_consumption() - s.total_consumption())},
          {"nodes", std::move(nodes)},
          {"edges", std::move(edges)}};
}

void state_table(std::ostream& os, const Network& net, const OperationState& nom,
                 const std::vector<const OperationState*>& states) {
  os << pad("node", 10) << pad("nominal", 12);
  for (const auto* s : states) os << pad(std::string(mode_name(s->mode)), 12) << pad("outage", 12);
  os << "\n";
  for (NodeIndex j = 0; j < net.node_count(); ++j) {
    os << pad(name_of(net, j), 10) << pad(fixed4(nom.consumption[j]), 12);
    for (const auto* s : states) {
      os << pad(fixed4(s->consumption[j]), 12)
         << pad(fixed4(std::max(0.0, nom.consumption[j] - s->consumption[j])), 12);
    }
    os << "\n";
  }
  os << pad("total", 10) << pad(fixed4(nom.total_consumption()), 12);
  for (const auto* s : states) {
    os << pad(fixed4(s->total_consumption()), 12)
       << pad(fixed4(std::max(0.0, nom.total_consumption() - s->total_consumption())), 12);
  }
  os << "\n\n" << pad("edge", 8) << pad("from->to", 12) << pad("NOM", 12);
  for (const auto* s : states) os << pad(std::string(mode_name(s->mode)), 12);
  os << "\n";
  for (EdgeIndex i = 0; i < net.edge_count(); ++i) {
    const auto& e = net.edge(i);
    os << pad(edge_name(net, i), 8) << pad(name_of(net, e.from) + "->" + name_of(net, e.to), 12)
       << pad(fixed4(nom.flow[i]), 12);
    for (const auto* s : states) os << pad(fixed4(s->flow[i]), 12);
    os << "\n";
  }
}

void state_csv(std::ostream& os, const Network& net, const OperationState& nom,
               const std::vector<const OperationState*>& states) {
  os << "mode,node,nominal_consumption,consumption,outage,inlet,reservoir_inlet\n";
  for (const auto* s : states) {
    for (NodeIndex j = 0; j < net.node_count(); ++j) {
      os << mode_name(s->mode) << ',' << csv_field(name_of(net, j)) << ','
         << num(nom.consumption[j]) << ',' << num(s->consumption[j]) << ','
         << num(std::max(0.0, nom.consumption[j] - s->consumption[j])) << ','
         << num(s->inlet[j]) << ',' << num(s->reservoir_inlet[j]) << "\n";
    }
  }
}

}  // namespace

Format parse_format(const std::string& name) {
  if (name == "table") return Format::kTable;
  if (name == "json") return Format::kJson;
  if (name == "csv") return Format::kCsv;
  throw InputError("unknown format '" + name + "' (expected table, json or csv)");
}

std::string fixed4(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  std::string s(buf);
  if (s == "-0.0000") s = "0.0000";
  return s;
}

std::string render_dom(const Network& net, const OperationState& nom, const std::string& label,
                       const OperationState& dom, Format format) {
  std::ostringstream os;
  switch (format) {
    case Format::kJson: {
      ordered_json doc = {{"format_version", 1}, {"scenario", label},
                          {"state", state_json(net, nom, dom)}};
      os << doc.dump(2) << "\n";
      break;
    }
    case Format::kCsv: state_csv(os, net, nom, {&dom}); break;
    case Format::kTable:
      os << "scenario: " << label << "\n\n";
      state_table(os, net, nom, {&dom});
      break;
  }
  return os.str();
}

std::string render_restore(const Network& net, const OperationState& nom, const RestoreView& v,
                           Format format) {
  std::vector<const OperationState*> states{&v.dom, &v.rrom};
  if (v.raom) states.push_back(&*v.raom);
  const double rerouted = v.rrom.total_consumption() - v.dom.total_consumption();
  std::optional<double> delivered;
  if (v.raom) delivered = v.raom->total_consumption() - v.rrom.total_consumption();
  std::ostringstream os;
  switch (format) {
    case Format::kJson: {
      ordered_json st = ordered_json::object();
      for (const auto* s : states) st[mode_name(s->mode)] = state_json(net, nom, *s);
      ordered_json doc = {{"format_version", 1},
                          {"scenario", v.label},
                          {"rerouted", rerouted},
                          {"rerouting_stage1_total", v.rerouting.stage1_total},
                          {"reservoir_delivered", optional_number(delivered)},
                          {"compensation_ratio", optional_number(v.ratio)},
                          {"states", std::move(st)}};
      os << doc.dump(2) << "\n";
      break;
    }
    case Format::kCsv: state_csv(os, net, nom, states); break;
    case Format::kTable:
      os << "scenario: " << v.label << "\n";
      os << "re-routed volume: " << fixed4(rerouted) << "\n";
      if (delivered) os << "reservoir delivered: " << fixed4(*delivered) << "\n";
      if (v.raom) os << "compensation ratio: " << optional_fixed(v.ratio) << "\n";
      os << "\n";
      state_table(os, net, nom, states);
      break;
  }
  return os.str();
}

std::string render_significance(const Network& net, const std::vector<ScenarioResult>& results,
                                const SignificanceReport& report, Format format) {
  std::ostringstream os;
  auto row_name = [&](const ReservoirSignificance& r) {
    return r.reservoir ? name_of(net, *r.reservoir) : std::string("joint");
  };
  std::vector<const ReservoirSignificance*> rows;
  for (const auto& r : report.per_reservoir) rows.push_back(&r);
  if (report.joint) rows.push_back(&*report.joint);

  switch (format) {
    case Format::kJson: {
      ordered_json reservoirs = ordered_json::array();
      for (const auto* r : rows) {
        reservoirs.push_back(
            {{"node", r->reservoir ? ordered_json(*r->reservoir) : ordered_json(nullptr)},
             {"name", row_name(*r)},
             {"average", optional_number(r->average)},
             {"weighted_average", optional_number(r->weighted_average)},
             {"scenario_count", r->scenario_count},
             {"excluded_count", r->excluded_count},
             {"failed_count", r->failed_count}});
      }
      ordered_json scenarios = ordered_json::array();
      for (const auto& res : results) {
        ordered_json ratios = ordered_json::object();
        ordered_json compensated = ordered_json::object();
        for (const auto& o : res.reservoirs) {
          ratios[name_of(net, o.reservoir)] = optional_number(o.ratio);
          compensated[name_of(net, o.reservoir)] = o.compensated;
        }
        ordered_json s = {{"label", res.scenario.label},
                          {"weight", optional_number(res.scenario.weight)},
                          {"error", res.error ? ordered_json(*res.error) : ordered_json(nullptr)},
                          {"outage_after_dom", res.outage_after_dom},
                          {"rerouted", res.rerouted},
                          {"outage_after_rrom", res.outage_after_rrom},
                          {"compensated", std::move(compensated)},
                          {"ratios", std::move(ratios)}};
        if (res.joint) {
          s["joint_compensated"] = res.joint->compensated;
          s["joint_ratio"] = optional_number(res.joint->ratio);
        }
        scenarios.push_back(std::move(s));
      }
      ordered_json doc = {{"format_version", 1},
                          {"total_scenarios", report.total_scenarios},
                          {"reservoirs", std::move(reservoirs)},
                          {"scenarios", std::move(scenarios)}};
      os << doc.dump(2) << "\n";
      break;
    }
    case Format::kCsv: {
      os << "kind,scenario,reservoir,outage_after_dom,rerouted,outage_after_rrom,compensated,"
            "ratio\n";
      for (const auto& res : results) {
        auto line = [&](const std::string& reservoir, const ReservoirOutcome* o) {
          os << "scenario," << csv_field(res.scenario.label) << ',' << csv_field(reservoir) << ','
             << num(res.outage_after_dom) << ',' << num(res.rerouted) << ','
             << num(res.outage_after_rrom) << ',';
          if (o) os << num(o->compensated);
          os << ',';
          if (o && o->ratio) os << num(*o->ratio);
          os << "\n";
        };
        for (const auto& o : res.reservoirs) line(name_of(net, o.reservoir), &o);
        if (res.joint) line("joint", &*res.joint);
      }
      for (const auto* r : rows) {
        os << "average,," << csv_field(row_name(*r)) << ",,,,,";
        if (r->average) os << num(*r->average);
        os << "\n";
        if (r->weighted_average) {
          os << "weighted_average,," << csv_field(row_name(*r)) << ",,,,," << num(*r->weighted_average)
             << "\n";
        }
      }
      break;
    }
    case Format::kTable: {
      os << "reservoir significance over " << report.total_scenarios << " scenarios\n";
      os << pad("reservoir", 12) << pad("average", 10) << pad("weighted", 10) << pad("counted", 9)
         << pad("excluded", 10) << "failed\n";
      for (const auto* r : rows) {
        os << pad(row_name(*r), 12) << pad(optional_fixed(r->average), 10)
           << pad(optional_fixed(r->weighted_average), 10)
           << pad(std::to_string(r->scenario_count), 9)
           << pad(std::to_string(r->excluded_count), 10) << r->failed_count << "\n";
      }
      os << "\n" << pad("scenario", 22) << pad("outage_dom", 12) << pad("rerouted", 12)
         << pad("outage_rrom", 12);
      for (const auto* r : rows) os << pad(row_name(*r), 10);
      os << "\n";
      for (const auto& res : results) {
        os << pad(res.scenario.label, 22);
        if (res.error) {
          os << "error: " << *res.error << "\n";
          continue;
        }
        os << pad(fixed4(res.outage_after_dom), 12) << pad(fixed4(res.rerouted), 12)
           << pad(fixed4(res.outage_after_rrom), 12);
        for (const auto& o : res.reservoirs) os << pad(optional_fixed(o.ratio), 10);
        if (res.joint) os << pad(optional_fixed(res.joint->ratio), 10);
        os << "\n";
      }
      break;
    }
  }
  return os.str();
}

}  // namespace gasnet
