#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "costshare/error.hpp"
#include "costshare/graph.hpp"
#include "costshare/hypercube.hpp"
#include "costshare/poa.hpp"
#include "costshare/protocols.hpp"
#include "costshare/stochastic.hpp"

namespace costshare {

using Json = nlohmann::json;

// {"vertices": [...], "root": "...", "edges": [["u","v", cost or "inf"], ...],
//  "probs": {"v": p, ...}}; "probs" is optional.
struct Instance {
  Graph graph;
  std::optional<ActivationModel> model;
};

Instance parse_instance(const Json& json);
Json instance_to_json(const Graph& graph, const ActivationModel* model = nullptr);

// {"parts": [["a","b"],["c"]], "weights": {"a": 1.0, ...}} or the ordered
// shorthand {"order": ["a","b",...]}. Missing weights default to 1.
GwspProtocol parse_protocol(const Graph& graph, const Json& json);
Json protocol_to_json(const Graph& graph, const GwspProtocol& protocol);

// {"n": N, "r": R, "path": ["0110", ...], "labels": [...]}.
ZigZagCertificate parse_certificate(const Json& json);
Json certificate_to_json(const ZigZagCertificate& certificate);

Json order_to_json(const Graph& graph, const UniversalOrder& order);
Json report_to_json(const Graph& graph, const PoaReport& report);
Json error_to_json(const Error& error);

Json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace costshare
