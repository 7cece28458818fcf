#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "anisoframe/dyadic.hpp"

namespace anisoframe {

using IntVec = std::vector<std::int64_t>;
using Point = std::vector<Dyadic>;

enum class IndexKind : std::uint8_t { coarse = 0, cone = 1 };

// One frame atom / one cube. Member order defines the total order:
// coarse before cone, then cone, scale, shear (lexicographic), translate (lexicographic).
struct ShearIndex {
  IndexKind kind = IndexKind::coarse;
  int cone = 0;   // 1..d for cone indices, 0 for coarse
  int scale = 0;  // 0 for coarse
  IntVec shear;   // length d-1, empty for coarse
  IntVec translate;

  static ShearIndex coarse(IntVec k);
  static ShearIndex at(int cone, int scale, IntVec shear, IntVec k);

  bool is_coarse() const { return kind == IndexKind::coarse; }
  int dim() const { return static_cast<int>(translate.size()); }

  friend bool operator==(const ShearIndex&, const ShearIndex&) = default;
  friend std::strong_ordering operator<=>(const ShearIndex& a, const ShearIndex& b);
};

// Throws InvalidIndex on |shear_i| > 2^scale, bad cone, or length mismatch.
void validate(const ShearIndex& idx);

using IndexSet = std::set<ShearIndex>;

// Integer matrix stored row-major, dim x dim.
struct IntMatrix {
  int dim = 0;
  std::vector<std::int64_t> a;
  std::int64_t operator()(int r, int c) const { return a[static_cast<std::size_t>(r * dim + c)]; }
};

// M = B^{[l]} A^{j} for the cone of idx (identity for coarse). x lies in the cube iff M x - k in [0,1)^d.
IntMatrix forward_map(const ShearIndex& idx);

struct Cube {
  int dim = 0;
  Point origin;               // image of the lattice corner k
  std::vector<Point> edges;   // edges[c] is the image of the c-th unit vector
  Dyadic measure;
  IntMatrix forward;
  IntVec translate;

  bool contains(const Point& x) const;
  std::vector<Point> vertices() const;  // 2^d corners, binary order of the unit-cube corner
};

Cube cube_of(const ShearIndex& idx);

// |Q| as a double: 2^{-(d+1)j}, 1 for coarse.
double cube_measure(const ShearIndex& idx);
Dyadic cube_measure_exact(const ShearIndex& idx);

double measure_nu(const IndexSet& gamma, double beta);

// All shear vectors with |l_i| <= 2^j, lexicographic.
std::vector<IntVec> shears_at_scale(int d, int j);
std::int64_t shear_count(int d, int j);

struct Box {
  Point lo;
  Point hi;  // half-open [lo, hi)
};

struct PartitionViolation {
  Point point;
  int cover_count = 0;
};

struct PartitionReport {
  bool ok = true;
  std::int64_t points_checked = 0;
  std::int64_t violation_count = 0;
  std::vector<PartitionViolation> violations;  // first few, for diagnostics
};

// Samples a dyadic grid inside the window and checks every point lies in exactly one cube of
// the (cone, j, l) layer. Cubes listed in `omitted` are treated as absent.
PartitionReport partition_check(int cone, int j, const IntVec& shear, const Box& window,
                                const IndexSet& omitted = {}, std::size_t max_listed = 64);

enum class ExtremeMode { largest, smallest };

std::optional<ShearIndex> extreme_cube_at(const Point& x, const IndexSet& gamma, ExtremeMode mode);

// Line format: "C k1 .. kd" or "S cone j l1 .. l(d-1) k1 .. kd".
std::string format_index(const ShearIndex& idx);
ShearIndex parse_index(const std::vector<std::int64_t>& fields, bool coarse);
ShearIndex parse_index_line(const std::string& line);
void write_index_set(std::ostream& os, const IndexSet& gamma);
IndexSet read_index_set(std::istream& is);

}  // namespace anisoframe
