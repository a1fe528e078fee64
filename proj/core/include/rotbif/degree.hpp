#pragma once

#include <Eigen/Dense>
#include <functional>
#include <variant>
#include <vector>

namespace rotbif {

struct Segment {
  Eigen::Vector2d a;
  Eigen::Vector2d b;
};

// Circular arc traced from angle0 to angle1; increasing angle runs
// counterclockwise, decreasing clockwise.
struct Arc {
  Eigen::Vector2d center;
  double radius;
  double angle0;
  double angle1;
};

using CurvePiece = std::variant<Segment, Arc>;

Eigen::Vector2d piece_start(const CurvePiece& p);
Eigen::Vector2d piece_end(const CurvePiece& p);
Eigen::Vector2d piece_point(const CurvePiece& p, double t);

// Closed simple contour made of segments and arcs. Positive orientation
// means the enclosed region lies on the left of the direction of travel.
class BoundaryCurve {
 public:
  explicit BoundaryCurve(std::vector<CurvePiece> pieces);

  const std::vector<CurvePiece>& pieces() const { return pieces_; }
  BoundaryCurve reversed() const;

  static BoundaryCurve circle(const Eigen::Vector2d& center, double radius);

 private:
  std::vector<CurvePiece> pieces_;
};

struct PlanarField {
  std::function<Eigen::Vector2d(const Eigen::Vector2d&)> eval;
  double zero_free_margin = 1e-9;
};

// Winding number of f restricted to the contour, certified by refining until
// every angle increment between consecutive samples is below pi/2. Throws
// std::runtime_error when the field dips under its margin on the contour or
// when certification would need more than 2^20 evaluations.
int winding_degree(const PlanarField& f, const BoundaryCurve& curve,
                   int initial_samples_per_piece = 8);

// Degree of f on the circle of radius r about q0. The caller asserts q0 is
// the only zero inside; three concentric sample circles guard against obvious
// violations.
int brouwer_index(const PlanarField& f, const Eigen::Vector2d& q0, double r);

// Inward offset of a positively oriented contour by eps, with corners joined
// by radius-eps arcs centered on the 2*eps offset intersections so the result
// stays C^1 and simple. Throws std::invalid_argument when eps is too large
// for the shape.
BoundaryCurve shrunk_boundary(const BoundaryCurve& outline, double eps);

double distance_to_curve(const BoundaryCurve& curve, const Eigen::Vector2d& q);

}  // namespace rotbif
