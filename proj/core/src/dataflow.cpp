#include "mirflow/dataflow.hpp"

namespace mirflow {

void Executor::record_metrics(const std::string& name, std::size_t in_count,
                              std::size_t out_count, double seconds) {
  StageMetrics m;
  m.stage = name;
  m.in_count = in_count;
  m.out_count = out_count;
  m.seconds = seconds;
  metrics_.push_back(std::move(m));
}

}  // namespace mirflow
