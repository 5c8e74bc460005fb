// Strategy process for the staged bst sources.

#include "pbtbench/harness/runner.hpp"

namespace pbtbench::bst::staged {
Ops ops();
}

int main(int argc, char** argv) {
  using namespace pbtbench;
  return harness::child_main(argc, argv, [](const std::string& workload, const std::string&) {
    if (workload != "bst") throw std::invalid_argument("this binary runs workload 'bst', not '" + workload + "'");
    return workloads::make_bst(bst::staged::ops());
  });
}
