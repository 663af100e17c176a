#pragma once

#include <string>
#include <vector>

#include "omq/ast.hpp"
#include "omq/database.hpp"
#include "omq/kexpr.hpp"
#include "omq/ontology.hpp"
#include "omq/query.hpp"

namespace omq {

// Dialect is inferred: files whose first item is an s-expression are GF2,
// otherwise lines are DL inclusions and inverse-role use selects ALCI.
Ontology parse_ontology(const std::string& text);

Database parse_database(const std::string& text);

UCQ parse_query(const std::string& text);

KExpr parse_kexpr(const std::string& text);

// PACE-style tree decomposition file: "b <id> c1 c2 ...", "e <id> <id>",
// optional "r <id>" root line, optional "s ..." header, "c ..." comments.
struct TdFile {
  std::vector<std::pair<int, std::vector<std::string>>> bags;
  std::vector<std::pair<int, int>> edges;
  int root = -1;
};

TdFile parse_td(const std::string& text);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

std::string ontology_to_string(const Ontology& o);
std::string database_to_string(const Database& db);

}  // namespace omq
