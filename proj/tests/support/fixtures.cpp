#include "fixtures.hpp"

#include <map>
#include <mutex>

namespace csd::test {

FixedData a2_data() { return FixedData::from_exchange({{0, 1}, {-1, 0}}, {1, 1}, {0, 1}); }
FixedData g2_data() { return FixedData::from_exchange({{0, 3}, {-1, 0}}, {1, 3}, {0, 1}); }
FixedData kronecker_data() { return FixedData::from_exchange({{0, 2}, {-2, 0}}, {1, 1}, {0, 1}); }

namespace {

const Diagram& cached(std::map<long, Diagram>& cache, const FixedData& fd, long K) {
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(K);
  if (it == cache.end()) it = cache.emplace(K, complete_rank2(initial_diagram(fd, Seed::standard(2), K), K)).first;
  return it->second;
}

}  // namespace

const Diagram& a2(long K) {
  static std::map<long, Diagram> cache;
  return cached(cache, a2_data(), K);
}

const Diagram& g2(long K) {
  static std::map<long, Diagram> cache;
  return cached(cache, g2_data(), K);
}

const Diagram& kronecker(long K) {
  static std::map<long, Diagram> cache;
  return cached(cache, kronecker_data(), K);
}

std::vector<RatPoint> g2_g_vectors() {
  return {{1, 0}, {0, 1}, {-1, 0}, {0, -1}, {1, -1}, {1, -2}, {1, -3}, {2, -3}};
}

std::vector<RatPoint> g2_hull() { return {{1, -3}, {2, -3}, {1, 0}, {0, Rat(3, 2)}, {-1, 0}}; }

std::vector<RatPoint> a2_pentagon() { return {{0, -1}, {1, -1}, {1, 0}, {0, 1}, {-1, 0}}; }

}  // namespace csd::test
