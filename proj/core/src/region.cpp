#include "lcr/region.hpp"

#include <algorithm>
#include <cstdlib>
#include <stdexcept>

namespace lcr {

Region::Region(std::vector<int> sites) : sites_(std::move(sites)) {
  std::sort(sites_.begin(), sites_.end());
  sites_.erase(std::unique(sites_.begin(), sites_.end()), sites_.end());
}

Region::Region(std::initializer_list<int> sites)
    : Region(std::vector<int>(sites)) {}

Region Region::interval(int first, int length, int n_sites) {
  if (length < 0 || length > n_sites)
    throw std::invalid_argument("interval length out of range");
  std::vector<int> s;
  s.reserve(length);
  for (int i = 0; i < length; ++i)
    s.push_back(((first + i) % n_sites + n_sites) % n_sites);
  return Region(std::move(s));
}

bool Region::contains(int site) const {
  return std::binary_search(sites_.begin(), sites_.end(), site);
}

void Region::check_bounds(int n_sites) const {
  for (int s : sites_)
    if (s < 0 || s >= n_sites)
      throw std::out_of_range("region site out of lattice bounds");
}

Region Region::complement(int n_sites) const {
  check_bounds(n_sites);
  std::vector<int> out;
  out.reserve(n_sites - size());
  for (int s = 0; s < n_sites; ++s)
    if (!contains(s)) out.push_back(s);
  return Region(std::move(out));
}

Region Region::dilate(int radius, int n_sites) const {
  if (radius < 0) throw std::invalid_argument("dilate: negative radius");
  check_bounds(n_sites);
  std::vector<int> out;
  for (int s : sites_)
    for (int d = -radius; d <= radius; ++d)
      out.push_back(((s + d) % n_sites + n_sites) % n_sites);
  return Region(std::move(out));
}

int Region::distance_to(int site, int n_sites) const {
  if (empty()) throw std::logic_error("distance_to on empty region");
  int best = n_sites;
  for (int s : sites_) {
    int d = std::abs(site - s) % n_sites;
    d = std::min(d, n_sites - d);
    best = std::min(best, d);
  }
  return best;
}

}  // namespace lcr
