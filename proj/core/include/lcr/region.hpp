#pragma once

#include <initializer_list>
#include <vector>

namespace lcr {

// A set of lattice sites, kept sorted and duplicate-free.
class Region {
 public:
  Region() = default;
  explicit Region(std::vector<int> sites);
  Region(std::initializer_list<int> sites);

  // Contiguous interval [first, first + length) modulo n.
  static Region interval(int first, int length, int n_sites);

  const std::vector<int>& sites() const { return sites_; }
  int size() const { return static_cast<int>(sites_.size()); }
  bool empty() const { return sites_.empty(); }
  bool contains(int site) const;

  // Throws std::out_of_range unless every site lies in [0, n_sites).
  void check_bounds(int n_sites) const;

  Region complement(int n_sites) const;

  // All sites within `radius` sites of the region (periodic dilation).
  Region dilate(int radius, int n_sites) const;

  // Smallest number of lattice steps from `site` to the region (periodic).
  int distance_to(int site, int n_sites) const;

  bool operator==(const Region&) const = default;

 private:
  std::vector<int> sites_;
};

}  // namespace lcr
