#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <unistd.h>

#include "kmsdp/io.hpp"
#include "kmsdp/mixture.hpp"
#include "kmsdp/rng.hpp"

using namespace kmsdp;
using nlohmann::json;

namespace {

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    path = std::filesystem::temp_directory_path() /
           ("kmsdp_io_test_" + std::to_string(::getpid()));
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
  std::string file(const std::string& name) const {
    return (path / name).string();
  }
};

}  // namespace

TEST_CASE("format_double round-trips exactly") {
  StreamRng rng(1, 0);
  for (int i = 0; i < 1000; ++i) {
    const double v = rng.next_normal() * std::pow(10.0, (int)(rng.next_u64() % 17) - 8);
    CHECK(std::stod(format_double(v)) == v);
  }
  CHECK(format_double(0.0) == "0");
  CHECK(format_double(1.0) == "1");
  CHECK(format_double(0.5) == "0.5");
}

TEST_CASE("mixture spec json round-trip") {
  MixtureSpec spec;
  spec.seed = 99;
  MixtureComponent a;
  a.center = Eigen::Vector2d(1.0, -2.5);
  a.sigma = 0.25;
  a.n = 7;
  spec.components.push_back(a);
  MixtureComponent b;
  b.center = Eigen::Vector2d(0.0, 4.0);
  b.n = 3;
  b.kind = ComponentKind::uniform_ball;
  spec.components.push_back(b);

  MixtureSpec back = mixture_spec_from_json(mixture_spec_to_json(spec));
  CHECK(back.seed == 99);
  REQUIRE(back.components.size() == 2);
  CHECK((back.components[0].center - Eigen::Vector2d(1.0, -2.5)).norm() == 0.0);
  CHECK(back.components[0].sigma == 0.25);
  CHECK(back.components[0].n == 7);
  CHECK(back.components[0].kind == ComponentKind::gaussian);
  CHECK(back.components[1].kind == ComponentKind::uniform_ball);
}

TEST_CASE("mixture spec json validation names the missing field") {
  json j;
  j["seed"] = 1;
  j["components"] = json::array();
  json comp;
  comp["sigma"] = 1.0;
  comp["n"] = 5;
  j["components"].push_back(comp);
  CHECK_THROWS_WITH_AS(mixture_spec_from_json(j),
                       doctest::Contains("components[0].center"),
                       std::invalid_argument);

  j["components"][0]["center"] = {0.0, 0.0};
  CHECK_NOTHROW(mixture_spec_from_json(j));

  j["components"][0]["kind"] = "triangular";
  CHECK_THROWS_AS(mixture_spec_from_json(j), std::invalid_argument);
}

TEST_CASE("read_mixture_spec reports parse failures") {
  TempDir tmp;
  {
    std::ofstream f(tmp.file("bad.json"));
    f << "{ not json";
  }
  CHECK_THROWS_AS(read_mixture_spec(tmp.file("bad.json")),
                  std::invalid_argument);
  CHECK_THROWS_AS(read_mixture_spec(tmp.file("missing.json")),
                  std::runtime_error);
}

TEST_CASE("point cloud csv round-trips with labels") {
  TempDir tmp;
  MixtureSpec spec;
  spec.seed = 3;
  for (int t = 0; t < 2; ++t) {
    MixtureComponent comp;
    comp.center = Eigen::Vector3d(t * 5.0, 0.0, 1.0);
    comp.n = 6;
    spec.components.push_back(comp);
  }
  PointCloud cloud = sample_mixture(spec);
  write_point_cloud_csv(tmp.file("pts.csv"), cloud);
  PointCloud back = read_point_cloud_csv(tmp.file("pts.csv"));
  CHECK(back.dim() == 3);
  CHECK(back.count() == 12);
  CHECK((back.data - cloud.data).cwiseAbs().maxCoeff() == 0.0);
  REQUIRE(back.labels.has_value());
  CHECK(*back.labels == *cloud.labels);
}

TEST_CASE("point cloud csv round-trips without labels") {
  TempDir tmp;
  PointCloud cloud;
  cloud.data.resize(2, 3);
  cloud.data << 1.5, -2.25, 0.0, 3.0, 0.125, -7.5;
  write_point_cloud_csv(tmp.file("pts.csv"), cloud);
  PointCloud back = read_point_cloud_csv(tmp.file("pts.csv"));
  CHECK_FALSE(back.labels.has_value());
  CHECK((back.data - cloud.data).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("point cloud csv rejects malformed input") {
  TempDir tmp;
  {
    std::ofstream f(tmp.file("bad_header.csv"));
    f << "a,b\n1,2\n";
  }
  CHECK_THROWS_AS(read_point_cloud_csv(tmp.file("bad_header.csv")),
                  std::invalid_argument);
  {
    std::ofstream f(tmp.file("ragged.csv"));
    f << "x0,x1\n1,2\n3\n";
  }
  CHECK_THROWS_WITH_AS(read_point_cloud_csv(tmp.file("ragged.csv")),
                       doctest::Contains("line 3"), std::invalid_argument);
  {
    std::ofstream f(tmp.file("notnum.csv"));
    f << "x0\nfoo\n";
  }
  CHECK_THROWS_AS(read_point_cloud_csv(tmp.file("notnum.csv")),
                  std::invalid_argument);
  {
    std::ofstream f(tmp.file("empty.csv"));
    f << "x0,x1\n";
  }
  CHECK_THROWS_AS(read_point_cloud_csv(tmp.file("empty.csv")),
                  std::invalid_argument);
}

TEST_CASE("matrix csv round-trips at full precision") {
  TempDir tmp;
  StreamRng rng(17, 0);
  Eigen::MatrixXd M(4, 3);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 3; ++j) M(i, j) = rng.next_normal() / 3.0;
  write_matrix_csv(tmp.file("m.csv"), M);
  Eigen::MatrixXd back = read_matrix_csv(tmp.file("m.csv"));
  CHECK((back - M).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("clustering result json carries nulls for absent fields") {
  ClusteringResult r;
  r.centers = Eigen::MatrixXd::Zero(2, 2);
  r.centers(0, 1) = 3.5;
  r.assignment = {0, 1, 1};
  r.kmeans_value = 2.25;
  json j = clustering_result_to_json(r);
  CHECK(j["centers"][1][0] == 3.5);
  CHECK(j["assignment"] == json({0, 1, 1}));
  CHECK(j["kmeans_value"] == 2.25);
  CHECK(j["certificate"].is_null());

  r.certificate = 1.125;
  CHECK(clustering_result_to_json(r)["certificate"] == 1.125);
}

TEST_CASE("eval report json carries nulls for absent fields") {
  EvalReport rep;
  rep.kmeans_value = 4.0;
  rep.lifted_value = 4.0;
  json j = eval_report_to_json(rep);
  CHECK(j["kmeans_value"] == 4.0);
  CHECK(j["sdp_certificate"].is_null());
  CHECK(j["misclassification_rate"].is_null());
  rep.misclassification_rate = 0.25;
  CHECK(eval_report_to_json(rep)["misclassification_rate"] == 0.25);
}

TEST_CASE("trial table csv has the documented header and width") {
  TempDir tmp;
  VoronoiTrialRow row;
  row.trial = 0;
  row.n = 10;
  row.centroid_idx = 1;
  row.x = Eigen::Vector2d(0.5, -1.5);
  row.err_to_voronoi = 0.125;
  row.err_to_center = 0.5;
  write_trial_table_csv(tmp.file("t.csv"), {row});

  std::ifstream f(tmp.file("t.csv"));
  std::string header, line;
  std::getline(f, header);
  std::getline(f, line);
  CHECK(header == "trial,n,centroid_idx,x0,x1,err_to_voronoi,err_to_center");
  CHECK(line == "0,10,1,0.5,-1.5,0.125,0.5");
}

TEST_CASE("alpha table csv has the documented header") {
  TempDir tmp;
  AlphaTableRow row;
  row.d = 2;
  row.c = 1.0;
  row.alpha = 1.5;
  row.err = 0.25;
  write_alpha_table_csv(tmp.file("a.csv"), {row});
  std::ifstream f(tmp.file("a.csv"));
  std::string header, line;
  std::getline(f, header);
  std::getline(f, line);
  CHECK(header == "d,c,alpha,err");
  CHECK(line == "2,1,1.5,0.25");
}
