#pragma once
#include <vector>

namespace mcme {

// One decision inside a search layer; serialized to JSONL by the CLI.
struct TraceEvent {
  enum class Kind { Add, Remove, Erase, Skip, Stop };
  Kind kind = Kind::Stop;
  int round = 0;   // erase round (grow/shrink layer) or iteration count
  int var = -1;    // subject variable, -1 for round-level events
  double p = 0.0;      // p-value at decision time (CI layer)
  double value = 0.0;  // association value (screening layer)
};

inline const char* trace_kind_name(TraceEvent::Kind k) {
  switch (k) {
    case TraceEvent::Kind::Add: return "add";
    case TraceEvent::Kind::Remove: return "remove";
    case TraceEvent::Kind::Erase: return "erase";
    case TraceEvent::Kind::Skip: return "skip";
    case TraceEvent::Kind::Stop: return "stop";
  }
  return "unknown";
}

}  // namespace mcme
