#include "mcme/bn_model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <queue>
#include <sstream>
#include <unordered_map>

#include "mcme/errors.hpp"
#include "mcme/rng.hpp"

namespace mcme {

std::vector<std::pair<int, int>> Dag::edges() const {
  std::vector<std::pair<int, int>> out;
  for (int c = 0; c < n_nodes; ++c)
    for (int p : parents[c]) out.emplace_back(p, c);
  return out;
}

namespace {

bool kahn_order(const Dag& dag, std::vector<int>* order) {
  int n = dag.n_nodes;
  std::vector<int> indom(n, 0);
  std::vector<std::vector<int>> children(n);
  for (int c = 0; c < n; ++c)
    for (int p : dag.parents[c]) {
      children[p].push_back(c);
      ++indom[c];
    }
  // min-heap on node index keeps the order deterministic
  std::priority_queue<int, std::vector<int>, std::greater<int>> ready;
  for (int i = 0; i < n; ++i)
    if (indom[i] == 0) ready.push(i);
  order->clear();
  while (!ready.empty()) {
    int u = ready.top();
    ready.pop();
    order->push_back(u);
    for (int c : children[u])
      if (--indom[c] == 0) ready.push(c);
  }
  return static_cast<int>(order->size()) == n;
}

}  // namespace

bool is_acyclic(const Dag& dag) {
  std::vector<int> order;
  return kahn_order(dag, &order);
}

std::vector<int> topo_order(const Dag& dag) {
  std::vector<int> order;
  if (!kahn_order(dag, &order))
    throw Error(ErrorKind::Structure, "graph contains a directed cycle");
  return order;
}

int BayesNet::index_of(const std::string& var) const {
  for (int i = 0; i < n_nodes(); ++i)
    if (variables[i].name == var) return i;
  return -1;
}

// ---------------------------------------------------------------------------
// Interchange parser. Grammar (line-oriented, # comments):
//   network NAME
//   variable NAME { states LABEL+ }
//   probability NAME { table P+ }                      (root)
//   probability NAME | PARENT+ { (LABEL+ : P+)+ }      (keyed rows)
// Rows cover every parent configuration exactly once; row-major storage over
// the declared parent list.
// ---------------------------------------------------------------------------

namespace {

struct Token {
  std::string text;
  int line = 0;
  int col = 0;
};

std::vector<Token> tokenize(const std::string& text) {
  std::vector<Token> toks;
  int line = 1, col = 0;
  std::string cur;
  int cur_line = 0, cur_col = 0;
  bool comment = false;
  auto flush = [&]() {
    if (!cur.empty()) {
      toks.push_back({cur, cur_line, cur_col});
      cur.clear();
    }
  };
  for (char c : text) {
    ++col;
    if (c == '\n') {
      flush();
      comment = false;
      ++line;
      col = 0;
      continue;
    }
    if (comment) continue;
    if (c == '#') {
      flush();
      comment = true;
      continue;
    }
    if (c == ' ' || c == '\t' || c == '\r') {
      flush();
      continue;
    }
    if (c == '{' || c == '}' || c == '|' || c == ':') {
      flush();
      toks.push_back({std::string(1, c), line, col});
      continue;
    }
    if (cur.empty()) {
      cur_line = line;
      cur_col = col;
    }
    cur.push_back(c);
  }
  flush();
  return toks;
}

class Parser {
public:
  Parser(const std::string& text, std::string origin)
      : toks_(tokenize(text)), origin_(std::move(origin)) {}

  BayesNet parse() {
    expect_keyword("network");
    BayesNet net;
    net.name = take("network name");
    std::vector<std::vector<std::string>> parent_names;
    std::vector<bool> has_cpt;
    std::unordered_map<std::string, int> index;

    while (!done()) {
      const Token& t = peek();
      if (t.text == "variable") {
        take("keyword");
        Token name = next_token("variable name");
        if (index.count(name.text))
          fail(name, "duplicate variable " + name.text,
               ErrorKind::Validation);
        expect_punct("{");
        expect_keyword("states");
        VariableMeta meta{name.text, {}};
        while (!done() && peek().text != "}") {
          Token st = next_token("state label");
          for (const auto& s : meta.states)
            if (s == st.text)
              fail(st, "duplicate state " + st.text + " in " + name.text,
                   ErrorKind::Validation);
          meta.states.push_back(st.text);
        }
        expect_punct("}");
        if (meta.states.empty())
          fail(name, "variable " + name.text + " has no states",
               ErrorKind::Validation);
        index[name.text] = static_cast<int>(net.variables.size());
        net.variables.push_back(std::move(meta));
        parent_names.emplace_back();
        has_cpt.push_back(false);
      } else if (t.text == "probability") {
        take("keyword");
        Token name = next_token("variable name");
        auto it = index.find(name.text);
        if (it == index.end())
          fail(name, "probability for undeclared variable " + name.text,
               ErrorKind::Reference);
        int child = it->second;
        if (has_cpt[child])
          fail(name, "duplicate probability block for " + name.text,
               ErrorKind::Validation);
        has_cpt[child] = true;
        std::vector<std::string> parents;
        if (!done() && peek().text == "|") {
          take("separator");
          while (!done() && peek().text != "{") {
            Token p = next_token("parent name");
            if (!index.count(p.text))
              fail(p, "undeclared parent " + p.text, ErrorKind::Reference);
            if (p.text == name.text)
              fail(p, "variable " + p.text + " cannot parent itself",
                   ErrorKind::Structure);
            for (const auto& q : parents)
              if (q == p.text)
                fail(p, "duplicate parent " + p.text, ErrorKind::Validation);
            parents.push_back(p.text);
          }
        }
        parent_names[child] = parents;
        parse_cpt_block(net, index, child, parents, name);
      } else {
        fail(t, "expected 'variable' or 'probability', got '" + t.text + "'",
             ErrorKind::Format);
      }
    }

    int n = static_cast<int>(net.variables.size());
    net.dag.n_nodes = n;
    net.dag.parents.assign(n, {});
    for (int c = 0; c < n; ++c) {
      if (!has_cpt[c])
        throw Error(ErrorKind::Validation,
                    origin_ + ": variable " + net.variables[c].name +
                        " has no probability block");
      for (const auto& p : parent_names[c])
        net.dag.parents[c].push_back(index[p]);
    }
    std::vector<int> order;
    if (!kahn_order(net.dag, &order))
      throw Error(ErrorKind::Structure,
                  origin_ + ": parent declarations form a cycle");
    return net;
  }

private:
  // `cpts_rows` may arrive before all variables are declared only for already
  // declared parents, so cardinalities are known here.
  void parse_cpt_block(BayesNet& net,
                       const std::unordered_map<std::string, int>& index,
                       int child, const std::vector<std::string>& parents,
                       const Token& name_tok) {
    expect_punct("{");
    int r = net.variables[child].cardinality();
    int64_t q = 1;
    std::vector<int> pcards;
    for (const auto& p : parents) {
      int card = net.variables[index.at(p)].cardinality();
      pcards.push_back(card);
      q *= card;
    }
    Cpt cpt;
    cpt.child = child;
    cpt.child_cardinality = r;
    cpt.parent_config_count = static_cast<int>(q);
    cpt.probs.assign(static_cast<size_t>(q) * r, -1.0);
    std::vector<bool> filled(static_cast<size_t>(q), false);

    if (parents.empty()) {
      Token kw = next_token("'table'");
      if (kw.text != "table")
        fail(kw, "root probability block must use 'table'", ErrorKind::Format);
      read_row(net, child, 0, &cpt, kw);
      filled[0] = true;
    } else {
      while (!done() && peek().text != "}") {
        std::vector<Token> labels;
        while (!done() && peek().text != ":") labels.push_back(take_token());
        Token colon = expect_punct(":");
        if (labels.size() != parents.size())
          fail(colon,
               "row key has " + std::to_string(labels.size()) +
                   " labels, expected " + std::to_string(parents.size()),
               ErrorKind::Validation);
        int64_t row = 0;
        for (size_t k = 0; k < parents.size(); ++k) {
          const auto& states =
              net.variables[index.at(parents[k])].states;
          auto pos = std::find(states.begin(), states.end(), labels[k].text);
          if (pos == states.end())
            fail(labels[k],
                 "unknown state " + labels[k].text + " for parent " +
                     parents[k],
                 ErrorKind::Reference);
          row = row * pcards[k] + (pos - states.begin());
        }
        if (filled[static_cast<size_t>(row)])
          fail(labels.front(), "duplicate row for this parent configuration",
               ErrorKind::Validation);
        filled[static_cast<size_t>(row)] = true;
        read_row(net, child, row, &cpt, colon);
      }
      for (int64_t row = 0; row < q; ++row)
        if (!filled[static_cast<size_t>(row)])
          fail(name_tok,
               "probability block for " + net.variables[child].name +
                   " does not cover every parent configuration",
               ErrorKind::Validation);
    }
    expect_punct("}");
    net.cpts.resize(net.variables.size());
    net.cpts[child] = std::move(cpt);
  }

  void read_row(BayesNet& net, int child, int64_t row, Cpt* cpt,
                const Token& at) {
    int r = net.variables[child].cardinality();
    double sum = 0.0;
    for (int k = 0; k < r; ++k) {
      Token num = next_token("probability value");
      char* end = nullptr;
      double v = std::strtod(num.text.c_str(), &end);
      if (end == num.text.c_str() || *end != '\0')
        fail(num, "expected a probability, got '" + num.text + "'",
             ErrorKind::Format);
      if (v < 0.0 || v > 1.0)
        fail(num, "probability outside [0,1]", ErrorKind::Validation);
      cpt->probs[static_cast<size_t>(row) * r + k] = v;
      sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-6)
      fail(at,
           "row for " + net.variables[child].name + " sums to " +
               std::to_string(sum),
           ErrorKind::Validation);
    // exact renormalization so downstream invariants hold to 1e-9
    for (int k = 0; k < r; ++k)
      cpt->probs[static_cast<size_t>(row) * r + k] /= sum;
  }

  bool done() const { return pos_ >= toks_.size(); }
  const Token& peek() const { return toks_[pos_]; }
  Token take_token() { return toks_[pos_++]; }
  std::string take(const char* what) { return next_token(what).text; }

  Token next_token(const char* what) {
    if (done())
      throw Error(ErrorKind::Format,
                  origin_ + ": unexpected end of file, expected " +
                      std::string(what));
    return toks_[pos_++];
  }

  void expect_keyword(const std::string& kw) {
    Token t = next_token(kw.c_str());
    if (t.text != kw) fail(t, "expected '" + kw + "'", ErrorKind::Format);
  }

  Token expect_punct(const std::string& p) {
    Token t = next_token(p.c_str());
    if (t.text != p) fail(t, "expected '" + p + "'", ErrorKind::Format);
    return t;
  }

  [[noreturn]] void fail(const Token& t, const std::string& msg,
                         ErrorKind kind) {
    throw Error(kind, origin_ + ":" + std::to_string(t.line) + ":" +
                          std::to_string(t.col) + ": " + msg);
  }

  std::vector<Token> toks_;
  size_t pos_ = 0;
  std::string origin_;
};

}  // namespace

BayesNet parse_network_text(const std::string& text,
                            const std::string& origin) {
  return Parser(text, origin).parse();
}

BayesNet parse_network(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_network_text(ss.str(), path);
}

std::string serialize_network(const BayesNet& net) {
  std::ostringstream out;
  out.precision(17);
  out << "network " << net.name << "\n\n";
  for (const auto& v : net.variables) {
    out << "variable " << v.name << " {\n  states";
    for (const auto& s : v.states) out << ' ' << s;
    out << "\n}\n\n";
  }
  for (int c = 0; c < net.n_nodes(); ++c) {
    const auto& ps = net.dag.parents[c];
    const Cpt& cpt = net.cpts[c];
    out << "probability " << net.variables[c].name;
    if (!ps.empty()) {
      out << " |";
      for (int p : ps) out << ' ' << net.variables[p].name;
    }
    out << " {\n";
    if (ps.empty()) {
      out << "  table";
      for (int k = 0; k < cpt.child_cardinality; ++k) out << ' ' << cpt.at(0, k);
      out << "\n";
    } else {
      std::vector<int> pcards;
      for (int p : ps) pcards.push_back(net.variables[p].cardinality());
      for (int row = 0; row < cpt.parent_config_count; ++row) {
        std::vector<int> tup(ps.size());
        int rem = row;
        for (int k = static_cast<int>(ps.size()) - 1; k >= 0; --k) {
          tup[k] = rem % pcards[k];
          rem /= pcards[k];
        }
        out << " ";
        for (size_t k = 0; k < ps.size(); ++k)
          out << ' ' << net.variables[ps[k]].states[tup[k]];
        out << " :";
        for (int k = 0; k < cpt.child_cardinality; ++k)
          out << ' ' << cpt.at(row, k);
        out << "\n";
      }
    }
    out << "}\n\n";
  }
  return out.str();
}

Dataset forward_sample(const BayesNet& net, int n, uint64_t seed) {
  if (n < 1) throw Error(ErrorKind::Argument, "forward_sample: n must be >= 1");
  int nv = net.n_nodes();
  Dataset data;
  data.variables = net.variables;
  data.columns.assign(nv, std::vector<int32_t>(n, 0));
  std::vector<int> order = topo_order(net.dag);
  for (int node : order) {
    const auto& ps = net.dag.parents[node];
    const Cpt& cpt = net.cpts[node];
    int r = cpt.child_cardinality;
    auto& col = data.columns[node];
    for (int s = 0; s < n; ++s) {
      int64_t row = 0;
      for (int p : ps)
        row = row * net.variables[p].cardinality() + data.columns[p][s];
      double u = uniform01(seed, static_cast<uint64_t>(node),
                           static_cast<uint64_t>(s));
      double acc = 0.0;
      int pick = r - 1;  // guards roundoff at the top of the CDF
      for (int k = 0; k < r; ++k) {
        acc += cpt.at(static_cast<int>(row), k);
        if (u < acc) {
          pick = k;
          break;
        }
      }
      col[s] = pick;
    }
  }
  return data;
}

double joint_probability(const BayesNet& net,
                         const std::vector<int>& assignment) {
  if (static_cast<int>(assignment.size()) != net.n_nodes())
    throw Error(ErrorKind::Argument,
                "joint_probability: assignment length mismatch");
  for (int i = 0; i < net.n_nodes(); ++i)
    if (assignment[i] < 0 || assignment[i] >= net.variables[i].cardinality())
      throw Error(ErrorKind::Argument,
                  "joint_probability: code out of range for " +
                      net.variables[i].name);
  double pr = 1.0;
  for (int i = 0; i < net.n_nodes(); ++i) {
    int64_t row = 0;
    for (int p : net.dag.parents[i])
      row = row * net.variables[p].cardinality() + assignment[p];
    pr *= net.cpts[i].at(static_cast<int>(row), assignment[i]);
  }
  return pr;
}

void apply_reference_meta(Dataset& data, const BayesNet& net) {
  if (data.n_vars() != net.n_nodes())
    throw Error(ErrorKind::Argument,
                "reference network and dataset variable counts differ");
  for (int c = 0; c < data.n_vars(); ++c) {
    int j = net.index_of(data.variables[c].name);
    if (j < 0)
      throw Error(ErrorKind::Reference,
                  "dataset variable " + data.variables[c].name +
                      " not in reference network");
    const auto& states = net.variables[j].states;
    std::vector<int32_t> remap(data.variables[c].states.size(), -1);
    for (size_t s = 0; s < data.variables[c].states.size(); ++s) {
      const auto& label = data.variables[c].states[s];
      auto pos = std::find(states.begin(), states.end(), label);
      if (pos == states.end())
        throw Error(ErrorKind::Reference,
                    "state " + label + " of " + data.variables[c].name +
                        " not in reference network");
      remap[s] = static_cast<int32_t>(pos - states.begin());
    }
    for (auto& v : data.columns[c]) v = remap[v];
    data.variables[c].states = states;
  }
}

}  // namespace mcme
