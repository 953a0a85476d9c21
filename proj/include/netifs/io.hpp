#pragma once

#include <json.hpp>

#include "netifs/measures.hpp"

namespace netifs {

using Json = nlohmann::ordered_json;

struct IfsDocument {
  IfsSystem sys;
  std::optional<SelfSimilarMeasure> measure;
  std::string digest;  // stable hash of the canonicalized document
};

// Parses {"dim": d, "maps": [{"ratio": "p/q", "rotation": {...}?,
// "translation": [...]}, ...], "probabilities": [...]?}. Rationals are exact
// strings; floats are rejected with the offending field named.
IfsDocument parse_ifs_document(const Json& doc);
IfsDocument load_ifs_document(const std::string& path);

Json similarity_json(const Similarity& s);
Json region_json(const Region& r);
Json matrix_json(const TransitionMatrix& m);
Json net_interval_json(const NetInterval& n, int type_id);

Json validation_json(const ValidationReport& rep);
Json fnc_json(const FncReport& rep);
Json wsc_json(const WscBound& rep);
Json gftc_json(const GftcSet& rep);
Json fset_json(const FsetResult& rep);
Json overlap_json(const OverlapFloor& rep);
Json graph_json(const QuotientGraph& g, const ClassDecomposition& cd);
Json dim_json(const DimReport& rep);

// Wraps per-command results with the invocation context.
Json make_report(const std::string& command, const IfsDocument& doc, Json parameters,
                 Json results, std::vector<std::string> warnings);

std::string dot_export(const QuotientGraph& g, const ClassDecomposition& cd);

std::string fnv1a_digest(const std::string& data);

}  // namespace netifs
