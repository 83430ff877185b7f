#pragma once
#include <cstdint>
#include <string>
#include <vector>

namespace mcme {

struct VariableMeta {
  std::string name;
  std::vector<std::string> states;  // ordered; codes index into this
  int cardinality() const { return static_cast<int>(states.size()); }
};

// Immutable after load; columns are integer-coded, one vector per variable.
struct Dataset {
  std::vector<VariableMeta> variables;
  std::vector<std::vector<int32_t>> columns;

  int n_vars() const { return static_cast<int>(variables.size()); }
  int n_samples() const {
    return columns.empty() ? 0 : static_cast<int>(columns[0].size());
  }
  int cardinality(int v) const { return variables[v].cardinality(); }
  int index_of(const std::string& name) const;  // -1 when absent
};

struct CsvOptions {
  char delimiter = ',';
  bool header = true;
};

constexpr int64_t kDefaultCellCap = 10'000'000;

// States coded by first appearance in the file; cardinalities from observed
// distinct values. Ragged or empty input raises Format.
Dataset load_csv(const std::string& path, const CsvOptions& options = {});
Dataset parse_csv_text(const std::string& text, const std::string& origin,
                       const CsvOptions& options = {});

void write_csv(const Dataset& data, const std::string& path,
               char delimiter = ',');

// Test/tool helper: build a dataset from coded columns with generated labels
// ("s0".."sk"); cards gives each variable's cardinality (codes must fit).
Dataset make_dataset(const std::vector<std::string>& names,
                     const std::vector<int>& cards,
                     const std::vector<std::vector<int32_t>>& columns);

// Dense joint count table over `axes` (given in call order, first axis
// slowest). Cap guards against degenerate conditioning sets.
struct ContingencyTable {
  std::vector<int> axes;
  std::vector<int> dims;
  std::vector<int64_t> counts;  // row-major over dims
  int64_t total = 0;

  int64_t cell_count() const { return static_cast<int64_t>(counts.size()); }
};

ContingencyTable contingency(const Dataset& data, const std::vector<int>& vars,
                             int64_t cell_cap = kDefaultCellCap);

}  // namespace mcme
