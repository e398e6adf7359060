#include "lacuna/parallel.hpp"

#include <algorithm>
#include <atomic>

namespace lacuna {
namespace {
std::atomic<int> g_workers{1};
}

void set_worker_count(int n) { g_workers = std::max(1, n); }
int worker_count() { return g_workers.load(); }

}  // namespace lacuna
