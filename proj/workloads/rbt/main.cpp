// Strategy process for the staged rbt sources.

#include "pbtbench/harness/runner.hpp"

namespace pbtbench::rbt::staged {
Ops ops();
}

int main(int argc, char** argv) {
  using namespace pbtbench;
  return harness::child_main(argc, argv, [](const std::string& workload, const std::string&) {
    if (workload != "rbt") throw std::invalid_argument("this binary runs workload 'rbt', not '" + workload + "'");
    return workloads::make_rbt(rbt::staged::ops());
  });
}
