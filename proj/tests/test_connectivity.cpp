#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "stperc/clusters.hpp"
#include "stperc/configuration.hpp"
#include "stperc/directed.hpp"
#include "stperc/environment.hpp"
#include "stperc/errors.hpp"
#include "stperc/graph.hpp"
#include "stperc/rng.hpp"
#include "stperc/segments.hpp"
#include "stperc/spacetime.hpp"

using namespace stperc;

namespace {

Configuration make_config(uint32_t vertices, std::vector<std::vector<double>> cuts,
                          std::map<uint64_t, std::vector<double>> bridges,
                          bool directed = false) {
    Configuration c;
    c.vertex_count = vertices;
    c.directed = directed;
    c.cuts = std::move(cuts);
    c.bridges = std::move(bridges);
    return c;
}

}  // namespace

TEST_CASE("segments on a free line include both ends") {
    const SpaceTimeBox box(Graph::single_vertex(), 1.0, Boundary::Free);
    const Configuration c = make_config(1, {{0.3, 0.7}}, {});
    const SegmentSet segs(c, box);
    REQUIRE(segs.size() == 3);
    CHECK(segs[0].start == 0.0);
    CHECK(segs[0].length == doctest::Approx(0.3));
    CHECK(segs[1].start == 0.3);
    CHECK(segs[1].length == doctest::Approx(0.4));
    CHECK(segs[2].start == 0.7);
    CHECK(segs[2].length == doctest::Approx(0.3));
    CHECK(!segs[2].wraps);
    CHECK(segs.locate(0, 0.0) == 0);
    CHECK(segs.locate(0, 0.3) == 1);  // right-continuous at a cut
    CHECK(segs.locate(0, 0.699) == 1);
    CHECK(segs.locate(0, 1.0) == 2);  // closed at the free end
}

TEST_CASE("segments on a periodic line wrap and honor t = T = 0") {
    const SpaceTimeBox box(Graph::single_vertex(), 1.0, Boundary::PeriodicAll);
    const Configuration c = make_config(1, {{0.25, 0.75}}, {});
    const SegmentSet segs(c, box);
    REQUIRE(segs.size() == 2);
    CHECK(segs[0].start == 0.25);
    CHECK(segs[0].length == doctest::Approx(0.5));
    CHECK(segs[1].start == 0.75);
    CHECK(segs[1].length == doctest::Approx(0.5));
    CHECK(segs[1].wraps);
    CHECK(segs.locate(0, 0.1) == 1);
    CHECK(segs.locate(0, 0.75) == 1);
    CHECK(segs.locate(0, 1.0) == segs.locate(0, 0.0));

    const Configuration empty = make_config(1, {{}}, {});
    const SegmentSet full(empty, box);
    REQUIRE(full.size() == 1);
    CHECK(full[0].full_circle);
    CHECK(full[0].length == doctest::Approx(1.0));
}

TEST_CASE("offsets and max distances in circular arithmetic") {
    const SpaceTimeBox box(Graph::single_vertex(), 2.0, Boundary::PeriodicAll);
    const Configuration c = make_config(1, {{0.5, 1.5}}, {});
    const SegmentSet segs(c, box);
    const uint32_t wrap = segs.locate(0, 0.1);
    CHECK(segs[wrap].wraps);
    CHECK(segs.offset_in(wrap, 1.7) == doctest::Approx(0.2));
    CHECK(segs.offset_in(wrap, 0.3) == doctest::Approx(0.8));
    // offsets are measured in box coordinates: the wrap piece contains times
    // near 0, so from s = 1.7 the farthest closure point is t = 0
    CHECK(segs.max_abs_offset(wrap, 1.7) == doctest::Approx(1.7));
    CHECK(segs.max_abs_offset(segs.locate(0, 0.7), 0.7) == doctest::Approx(0.8));
}

TEST_CASE("hand-built cluster partition on a two-line box") {
    const Graph g = Graph::path(2);
    const SpaceTimeBox box(g, 1.0, Boundary::Free);
    const Configuration c = make_config(2, {{0.5}, {}}, {{0, {0.25}}});
    const ClusterLabeling lab = build_clusters(c, box);
    REQUIRE(lab.segments.size() == 3);
    CHECK(lab.cluster_count == 2);
    CHECK(lab.label_at(0, 0.0) == lab.label_at(1, 0.9));
    CHECK(lab.label_at(0, 0.7) != lab.label_at(0, 0.3));
    const uint32_t joined = lab.label_at(0, 0.0);
    CHECK(lab.measure[joined] == doctest::Approx(1.5));

    const ClusterInfo info = cluster_at(lab, box, Point{0, 0.0});
    CHECK(info.measure == doctest::Approx(1.5));
    CHECK(info.radius == doctest::Approx(2.0));  // vertex 1 at time 1
    CHECK(info.space_extent == doctest::Approx(1.0));
    CHECK(info.time_extent == doctest::Approx(1.0));
    CHECK(info.segment_count == 2);
}

TEST_CASE("periodic-on-a-subset boundary only wraps chosen lines") {
    const Graph g = Graph::path(2);
    const SpaceTimeBox box(g, 1.0, std::vector<uint32_t>{0});
    const Configuration c = make_config(2, {{}, {}}, {{0, {0.5}}});
    const ClusterLabeling lab = build_clusters(c, box);
    REQUIRE(lab.segments.size() == 2);
    CHECK(lab.segments[lab.segments.line_begin(0)].full_circle);
    CHECK(!lab.segments[lab.segments.line_begin(1)].full_circle);
    CHECK(lab.cluster_count == 1);
    CHECK(lab.label_at(0, 1.0) == lab.label_at(0, 0.0));
}

TEST_CASE("a bridge exactly on a cut is corrupt input") {
    const Graph g = Graph::path(2);
    const SpaceTimeBox box(g, 1.0, Boundary::Free);
    const Configuration c = make_config(2, {{0.5}, {}}, {{0, {0.5}}});
    CHECK_THROWS_AS(build_clusters(c, box), CorruptState);
    CHECK_THROWS_AS(validate_configuration(c, box), CorruptState);
}

TEST_CASE("union-find merges and counts components") {
    UnionFind uf(5);
    CHECK(uf.unite(0, 1));
    CHECK(!uf.unite(1, 0));
    CHECK(uf.unite(2, 3));
    CHECK(uf.find(0) == uf.find(1));
    CHECK(uf.find(0) != uf.find(2));
    CHECK(uf.unite(1, 3));
    CHECK(uf.find(0) == uf.find(2));
    CHECK(uf.find(4) == 4);
}

TEST_CASE("directed reach on a hand-built configuration") {
    const Graph g = Graph::path(2);
    const SpaceTimeBox box(g, 2.0, Boundary::Free);
    // bridge key 0 = edge 0 oriented from vertex 0 to vertex 1
    const Configuration c = make_config(2, {{1.0}, {0.5}}, {{0, {0.75}}}, true);
    const DirectedReach reach = directed_reach(c, box, Point{0, 0.2});

    CHECK(reach.total_measure == doctest::Approx(0.8 + 1.25));
    CHECK(reach.radius == doctest::Approx(1.0 + 1.8));
    CHECK(reach.space_extent == doctest::Approx(1.0));
    CHECK(reach.time_extent == doctest::Approx(1.8));
    CHECK(reach.covers(0, 0.5));
    CHECK(reach.covers(1, 1.5));
    CHECK(!reach.covers(0, 0.1));   // cannot move backward in time
    CHECK(!reach.covers(1, 0.6));   // before the bridge jump
    CHECK(!reach.covers(0, 1.5));   // beyond the cut on line 0

    // reversing the bridge orientation removes line 1 from the reach
    const Configuration r = make_config(2, {{1.0}, {0.5}}, {{1, {0.75}}}, true);
    const DirectedReach reach2 = directed_reach(r, box, Point{0, 0.2});
    CHECK(reach2.total_measure == doctest::Approx(0.8));
    CHECK(!reach2.covers(1, 1.5));
}

TEST_CASE("directed reach wraps periodic lines up to a full circle") {
    const SpaceTimeBox box(Graph::single_vertex(), 1.0, Boundary::PeriodicAll);
    const Configuration c = make_config(1, {{}}, {}, true);
    const DirectedReach reach = directed_reach(c, box, Point{0, 0.4});
    REQUIRE(reach.pieces.size() == 1);
    CHECK(reach.pieces[0].full_circle);
    CHECK(reach.total_measure == doctest::Approx(1.0));
    CHECK(reach.covers(0, 0.1));

    const Configuration cut = make_config(1, {{0.25}}, {}, true);
    const DirectedReach stopped = directed_reach(cut, box, Point{0, 0.4});
    CHECK(stopped.total_measure == doctest::Approx(1.0 - 0.15));
    CHECK(stopped.covers(0, 0.1));    // wrapped past T
    CHECK(!stopped.covers(0, 0.3));   // blocked by the cut at 0.25
}

TEST_CASE("random clusterings agree with a brute-force scan oracle") {
    const std::vector<Graph> pool = {Graph::path(2), Graph::path(3), Graph::cycle(4),
                                     Graph::complete(4)};
    for (int i = 0; i < 300; ++i) {
        RngStream pick(123, StreamPurpose::Generic, 0, i);
        const Graph& g = pool[pick.next_below(pool.size())];
        const double T = 0.5 + 2.0 * pick.next_unit();
        const SpaceTimeBox box(g, T,
                               pick.next_below(2) ? Boundary::PeriodicAll : Boundary::Free);
        const IntensityEnvironment env = IntensityEnvironment::uniform(
            1.5 * pick.next_unit(), 0.3 + 1.2 * pick.next_unit());
        const Configuration c = sample_configuration(box, env, 123, 1000 + i);
        const ClusterLabeling lab = build_clusters(c, box);

        // oracle: locate bridge endpoints by scanning, then flood fill
        const SegmentSet& segs = lab.segments;
        UnionFind uf(segs.size());
        for_each_bridge(c, g, [&](uint32_t x, uint32_t y, double t) {
            const auto scan = [&](uint32_t v) {
                for (uint32_t s = segs.line_begin(v); s < segs.line_end(v); ++s) {
                    const Segment& seg = segs[s];
                    if (seg.full_circle) return s;
                    if (!seg.wraps && t >= seg.start && t < seg.start + seg.length) return s;
                    if (seg.wraps && (t >= seg.start || t < seg.start + seg.length - T)) return s;
                }
                return segs.line_end(v) - 1;
            };
            uf.unite(scan(x), scan(y));
        });
        uint32_t components = 0;
        for (uint32_t s = 0; s < segs.size(); ++s)
            if (uf.find(s) == s) ++components;
        CHECK(components == lab.cluster_count);
        for (uint32_t s = 0; s < segs.size(); ++s)
            for (uint32_t r = 0; r < s; ++r)
                CHECK((uf.find(s) == uf.find(r)) == (lab.label[s] == lab.label[r]));
    }
}

TEST_CASE("directed radius stays exact when a free piece ends at T") {
    // entry + length can exceed T by one ulp; the radius must not pick up a
    // spurious wrap offset from that
    const double T = 0.82517248347020244;
    const double cut = 0.25422929778697972;
    const double s = 0.44784810300875172;
    const SpaceTimeBox box(Graph::single_vertex(), T, Boundary::Free);
    const Configuration c = make_config(1, {{cut}}, {}, true);
    const Point origin{0, s};
    const DirectedReach reach = directed_reach(c, box, origin);
    REQUIRE(reach.pieces.size() == 1);
    CHECK(reach.radius == doctest::Approx(T - s).epsilon(1e-15));
    const ClusterInfo info = cluster_at(build_clusters(c, box), box, origin);
    CHECK(reach.radius <= info.radius + 1e-9);
}

TEST_CASE("directed reach is contained in the undirected cluster") {
    const Graph g = Graph::path(3);
    const SpaceTimeBox box(g, 2.0, Boundary::PeriodicAll);
    const IntensityEnvironment env = IntensityEnvironment::uniform(1.0, 1.0);
    for (int i = 0; i < 200; ++i) {
        const Configuration c = sample_configuration(box, env, 9, i, true);
        const Point origin{1, 1.0};
        const DirectedReach reach = directed_reach(c, box, origin);
        const ClusterLabeling lab = build_clusters(c, box);
        const ClusterInfo info = cluster_at(lab, box, origin);
        CHECK(reach.total_measure <= info.measure + 1e-9);
        CHECK(reach.radius <= info.radius + 1e-9);
        const uint32_t label = lab.label_at(origin.vertex, origin.time);
        for (const ReachPiece& piece : reach.pieces) {
            double mid = piece.full_circle ? piece.entry : piece.entry + 0.5 * piece.length;
            if (mid >= 2.0) mid -= 2.0;
            CHECK(lab.label_at(piece.vertex, mid) == label);
        }
    }
}
