#include "mcme/dataset.hpp"

#include <fstream>
#include <sstream>
#include <unordered_map>

#include "mcme/errors.hpp"

namespace mcme {

int Dataset::index_of(const std::string& name) const {
  for (int i = 0; i < n_vars(); ++i)
    if (variables[i].name == name) return i;
  return -1;
}

namespace {

std::vector<std::string> split_line(const std::string& line, char delim) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == delim) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

std::string strip_cr(std::string s) {
  if (!s.empty() && s.back() == '\r') s.pop_back();
  return s;
}

}  // namespace

Dataset parse_csv_text(const std::string& text, const std::string& origin,
                       const CsvOptions& options) {
  std::istringstream in(text);
  std::string line;
  std::vector<std::string> lines;
  while (std::getline(in, line)) lines.push_back(strip_cr(line));
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  if (lines.empty())
    throw Error(ErrorKind::Format, origin + ": empty input");

  Dataset data;
  size_t first_row = 0;
  size_t n_cols = 0;
  if (options.header) {
    auto header = split_line(lines[0], options.delimiter);
    n_cols = header.size();
    for (auto& h : header) data.variables.push_back({h, {}});
    first_row = 1;
  } else {
    n_cols = split_line(lines[0], options.delimiter).size();
    for (size_t i = 0; i < n_cols; ++i)
      data.variables.push_back({"v" + std::to_string(i), {}});
  }
  if (lines.size() <= first_row)
    throw Error(ErrorKind::Format, origin + ": no data rows");

  data.columns.assign(n_cols, {});
  std::vector<std::unordered_map<std::string, int32_t>> code(n_cols);
  for (size_t r = first_row; r < lines.size(); ++r) {
    auto cells = split_line(lines[r], options.delimiter);
    if (cells.size() != n_cols)
      throw Error(ErrorKind::Format,
                  origin + ":" + std::to_string(r + 1) + ": expected " +
                      std::to_string(n_cols) + " cells, got " +
                      std::to_string(cells.size()));
    for (size_t c = 0; c < n_cols; ++c) {
      if (cells[c].empty())
        throw Error(ErrorKind::Format, origin + ":" + std::to_string(r + 1) +
                                           ": empty cell in column " +
                                           data.variables[c].name);
      auto [it, inserted] =
          code[c].try_emplace(cells[c], static_cast<int32_t>(code[c].size()));
      if (inserted) data.variables[c].states.push_back(cells[c]);
      data.columns[c].push_back(it->second);
    }
  }
  return data;
}

Dataset load_csv(const std::string& path, const CsvOptions& options) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_csv_text(ss.str(), path, options);
}

void write_csv(const Dataset& data, const std::string& path, char delimiter) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path);
  for (int v = 0; v < data.n_vars(); ++v) {
    if (v) out << delimiter;
    out << data.variables[v].name;
  }
  out << '\n';
  for (int r = 0; r < data.n_samples(); ++r) {
    for (int v = 0; v < data.n_vars(); ++v) {
      if (v) out << delimiter;
      out << data.variables[v].states[data.columns[v][r]];
    }
    out << '\n';
  }
}

Dataset make_dataset(const std::vector<std::string>& names,
                     const std::vector<int>& cards,
                     const std::vector<std::vector<int32_t>>& columns) {
  if (names.size() != cards.size() || names.size() != columns.size())
    throw Error(ErrorKind::Argument, "make_dataset: size mismatch");
  Dataset data;
  for (size_t i = 0; i < names.size(); ++i) {
    VariableMeta meta{names[i], {}};
    for (int s = 0; s < cards[i]; ++s)
      meta.states.push_back("s" + std::to_string(s));
    data.variables.push_back(std::move(meta));
    for (int32_t v : columns[i])
      if (v < 0 || v >= cards[i])
        throw Error(ErrorKind::Argument,
                    "make_dataset: code out of range in " + names[i]);
    if (columns[i].size() != columns[0].size())
      throw Error(ErrorKind::Argument, "make_dataset: ragged columns");
  }
  data.columns = columns;
  return data;
}

ContingencyTable contingency(const Dataset& data, const std::vector<int>& vars,
                             int64_t cell_cap) {
  if (vars.empty())
    throw Error(ErrorKind::Argument, "contingency: empty variable list");
  std::vector<bool> seen(data.n_vars(), false);
  int64_t cells = 1;
  ContingencyTable table;
  table.axes = vars;
  for (int v : vars) {
    if (v < 0 || v >= data.n_vars())
      throw Error(ErrorKind::Argument, "contingency: variable out of range");
    if (seen[v])
      throw Error(ErrorKind::Argument, "contingency: duplicate variable " +
                                           data.variables[v].name);
    seen[v] = true;
    int d = data.cardinality(v);
    table.dims.push_back(d);
    cells *= d;
    if (cells > cell_cap)
      throw Error(ErrorKind::Capacity,
                  "contingency: cell count exceeds cap of " +
                      std::to_string(cell_cap));
  }
  table.counts.assign(static_cast<size_t>(cells), 0);
  int n = data.n_samples();
  for (int r = 0; r < n; ++r) {
    int64_t idx = 0;
    for (size_t k = 0; k < vars.size(); ++k)
      idx = idx * table.dims[k] + data.columns[vars[k]][r];
    ++table.counts[static_cast<size_t>(idx)];
  }
  table.total = n;
  return table;
}

}  // namespace mcme
