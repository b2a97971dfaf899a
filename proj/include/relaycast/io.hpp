#ifndef RELAYCAST_IO_HPP
#define RELAYCAST_IO_HPP

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "relaycast/complementary.hpp"
#include "relaycast/engine.hpp"
#include "relaycast/faults.hpp"
#include "relaycast/graph.hpp"
#include "relaycast/params.hpp"
#include "relaycast/properties.hpp"

namespace relaycast {

using json = nlohmann::ordered_json;

/// Shortest decimal that parses back to the same double.
std::string format_double(double v);

// Graph adjacency text: header "n d bipartite|nonbipartite lambda", then one
// "id: n1 n2 ..." line per node, 0-based ids.
void write_graph(std::ostream& os, const Graph& g);
Graph read_graph(std::istream& is, const std::string& label = "stream");
void save_graph(const std::string& path, const Graph& g);
Graph load_graph(const std::string& path);

// Trace CSV: header round,node,u,x,y,correct and one row per (round, node).
void write_trace_csv(std::ostream& os, const Trace& trace);
Trace read_trace_csv(std::istream& is);

json to_json(const InequalityCheck& c);
json to_json(const Verdict& v);
json to_json(const FeasibilityReport& r);
json to_json(const PropertyReport& r);
json to_json(const InitiationSpec& s);
json to_json(const Lemma6Result& r);

/// {T, Z, P_size, mu_achieved, mu_undefined, beta0}
json partition_json(const FaultPartition& p);
/// Inverse of partition_json; P is rebuilt as V \ Z.
FaultPartition partition_from_json(const json& j, std::size_t n);
InitiationSpec initiation_from_json(const json& j);

/// Writes to a temporary sibling and renames, so readers never see a partial file.
void write_file_atomic(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

}  // namespace relaycast

#endif  // RELAYCAST_IO_HPP
