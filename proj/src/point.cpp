#include "lshinv/point.hpp"

#include <string>

namespace lshinv {

const char* metric_name(Metric m) {
  switch (m) {
    case Metric::hamming: return "hamming";
    case Metric::euclidean: return "euclidean";
    case Metric::manhattan: return "manhattan";
  }
  throw InputError("unknown metric tag");
}

Metric metric_from_name(std::string_view name) {
  if (name == "hamming") return Metric::hamming;
  if (name == "euclidean") return Metric::euclidean;
  if (name == "manhattan") return Metric::manhattan;
  throw InputError("unknown metric name: " + std::string(name));
}

Point Point::zeros(Metric metric, std::uint32_t dim) {
  Point p;
  p.metric = metric;
  p.dim = dim;
  if (is_real_metric(metric))
    p.coords = Eigen::VectorXd::Zero(dim);
  else
    p.words.assign(words_per_point(dim), 0);
  return p;
}

double distance(const Point& x, const Point& y) {
  if (x.metric != y.metric) throw InputError("distance: metric mismatch");
  if (x.dim != y.dim) throw InputError("distance: dimension mismatch");
  switch (x.metric) {
    case Metric::hamming:
      return hamming_distance(x.words, y.words);
    case Metric::euclidean:
      return (x.coords - y.coords).norm();
    case Metric::manhattan:
      return (x.coords - y.coords).lpNorm<1>();
  }
  throw InputError("unknown metric tag");
}

}  // namespace lshinv
