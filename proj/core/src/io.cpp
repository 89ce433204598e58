#include "costshare/io.hpp"

#include <cmath>
#include <fstream>

namespace costshare {

namespace {

double parse_cost(const Json& value) {
  if (value.is_string()) {
    const std::string text = value.get<std::string>();
    require(text == "inf" || text == "+inf" || text == "infinity", "cost string must be \"inf\", got '" + text + "'");
    return kInf;
  }
  require(value.is_number(), "edge cost must be a number or \"inf\"");
  const double cost = value.get<double>();
  require(cost >= 0.0, "edge cost must be nonnegative");
  return cost;
}

Json cost_to_json(double cost) { return std::isinf(cost) ? Json("inf") : Json(cost); }

// nlohmann reports type mismatches as its own exceptions; surface them as
// validation errors.
template <typename F>
auto guarded(const char* what, F&& body) {
  try {
    return body();
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::kValidation, std::string("malformed ") + what + ": " + e.what());
  }
}

std::vector<Vertex> vertices_of(const Graph& graph, const Json& ids) {
  require(ids.is_array(), "expected an array of vertex ids");
  std::vector<Vertex> out;
  for (const Json& id : ids) out.push_back(graph.at(id.get<std::string>()));
  return out;
}

Json ids_of(const Graph& graph, const std::vector<Vertex>& vertices) {
  Json out = Json::array();
  for (Vertex v : vertices) out.push_back(graph.id(v));
  return out;
}

}  // namespace

Instance parse_instance(const Json& json) {
  return guarded("instance", [&] {
    require(json.is_object(), "instance must be a JSON object");
    require(json.contains("vertices") && json.contains("root") && json.contains("edges"),
            "instance needs \"vertices\", \"root\" and \"edges\"");
    std::vector<VertexId> ids = json.at("vertices").get<std::vector<VertexId>>();
    std::vector<EdgeSpec> edges;
    for (const Json& e : json.at("edges")) {
      require(e.is_array() && e.size() == 3, "each edge must be [u, v, cost]");
      edges.push_back({e[0].get<std::string>(), e[1].get<std::string>(), parse_cost(e[2])});
    }
    Instance inst{Graph(std::move(ids), json.at("root").get<std::string>(), edges), std::nullopt};
    if (json.contains("probs")) {
      std::vector<double> probs(inst.graph.num_vertices(), 0.0);
      for (const auto& [id, p] : json.at("probs").items()) {
        const Vertex v = inst.graph.at(id);
        require(v != inst.graph.root(), "the root cannot carry an activation probability");
        probs[v] = p.get<double>();
      }
      inst.model = ActivationModel(inst.graph, std::move(probs));
    }
    return inst;
  });
}

Json instance_to_json(const Graph& graph, const ActivationModel* model) {
  Json out;
  out["vertices"] = graph.ids();
  out["root"] = graph.id(graph.root());
  Json edges = Json::array();
  for (const Edge& e : graph.edges()) edges.push_back({graph.id(e.u), graph.id(e.v), cost_to_json(e.cost)});
  out["edges"] = std::move(edges);
  if (model) {
    Json probs = Json::object();
    for (Vertex v : graph.non_root_vertices()) probs[graph.id(v)] = model->probs[v];
    out["probs"] = std::move(probs);
  }
  return out;
}

GwspProtocol parse_protocol(const Graph& graph, const Json& json) {
  return guarded("protocol", [&] {
    require(json.is_object(), "protocol must be a JSON object");
    if (json.contains("order")) return GwspProtocol::ordered(graph, vertices_of(graph, json.at("order")));
    require(json.contains("parts"), "protocol needs \"parts\" or \"order\"");
    std::vector<std::vector<Vertex>> parts;
    for (const Json& part : json.at("parts")) parts.push_back(vertices_of(graph, part));
    std::vector<double> weights(graph.num_vertices(), 1.0);
    if (json.contains("weights")) {
      for (const auto& [id, w] : json.at("weights").items()) weights[graph.at(id)] = w.get<double>();
    }
    return GwspProtocol(graph, std::move(parts), std::move(weights));
  });
}

Json protocol_to_json(const Graph& graph, const GwspProtocol& protocol) {
  Json out;
  if (protocol.is_ordered()) {
    out["order"] = ids_of(graph, protocol.flattened_order(graph));
    return out;
  }
  Json parts = Json::array();
  Json weights = Json::object();
  for (const auto& part : protocol.parts()) {
    parts.push_back(ids_of(graph, part));
    for (Vertex v : part) weights[graph.id(v)] = protocol.weight(v);
  }
  out["parts"] = std::move(parts);
  out["weights"] = std::move(weights);
  return out;
}

ZigZagCertificate parse_certificate(const Json& json) {
  return guarded("certificate", [&] {
    require(json.is_object() && json.contains("n") && json.contains("r") && json.contains("path") &&
                json.contains("labels"),
            "certificate needs \"n\", \"r\", \"path\" and \"labels\"");
    ZigZagCertificate cert;
    cert.n = json.at("n").get<std::size_t>();
    cert.r = json.at("r").get<std::size_t>();
    const Hypercube cube(cert.n);
    for (const Json& x : json.at("path")) cert.path.push_back(cube.parse(x.get<std::string>()));
    cert.labels = json.at("labels").get<std::vector<std::uint32_t>>();
    return cert;
  });
}

Json certificate_to_json(const ZigZagCertificate& certificate) {
  const Hypercube cube(certificate.n);
  Json path = Json::array();
  for (Bits x : certificate.path) path.push_back(cube.id(x));
  return Json{{"n", certificate.n}, {"r", certificate.r}, {"path", std::move(path)}, {"labels", certificate.labels}};
}

Json order_to_json(const Graph& graph, const UniversalOrder& order) {
  Json provenance{{"kind", order.provenance == OrderProvenance::kRandomized ? "randomized" : "derandomized"},
                  {"sample", ids_of(graph, order.sample)}};
  if (order.provenance == OrderProvenance::kRandomized) provenance["seed"] = order.seed;
  return Json{{"order", ids_of(graph, order.order)}, {"provenance", std::move(provenance)}};
}

Json report_to_json(const Graph& graph, const PoaReport& report) {
  Json out{{"ratio", cost_to_json(report.ratio)},
           {"ne_cost", cost_to_json(report.ne_cost)},
           {"opt_cost", cost_to_json(report.opt_cost)},
           {"exact_opt", report.exact_opt},
           {"exact_ne", report.exact_ne}};
  if (report.samples) {
    out["samples"] = report.samples;
    out["ne_stderr"] = report.ne_stderr;
    out["opt_stderr"] = report.opt_stderr;
    out["ratio_stderr"] = report.ratio_stderr;
  } else if (!report.witness.empty()) {
    out["witness"] = ids_of(graph, report.witness);
  }
  if (!report.exact_opt) out["note"] = "OPT from the 2-approximation; the true ratio is at least ratio/2";
  return out;
}

Json error_to_json(const Error& error) {
  return Json{{"error", std::string(to_string(error.kind()))}, {"message", error.what()}};
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  require(in.good(), "cannot open '" + path.string() + "'");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::kValidation, "invalid JSON in '" + path.string() + "': " + e.what());
  }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  require(out.good(), "cannot write '" + path.string() + "'");
  out << text;
}

}  // namespace costshare
