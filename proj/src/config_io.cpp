#include "stperc/config_io.hpp"

#include <fstream>
#include <sstream>
#include <vector>

#include "stperc/errors.hpp"
#include "stperc/util.hpp"

namespace stperc {

namespace {

void write_box_header(std::ostream& os, const SpaceTimeBox& box) {
    const Graph& g = box.graph();
    if (g.complete_form()) {
        os << "# graph complete " << g.vertex_count() << "\n";
    } else {
        os << "# graph edges " << g.vertex_count() << " " << g.edge_count() << "\n";
        for (uint64_t e = 0; e < g.edge_count(); ++e) {
            const auto [x, y] = g.edge_endpoints(e);
            os << "# E " << x << " " << y << "\n";
        }
    }
    os << "# time " << format_double(box.time_length()) << "\n";
    switch (box.boundary()) {
        case Boundary::Free:
            os << "# boundary free\n";
            break;
        case Boundary::PeriodicAll:
            os << "# boundary periodic-all\n";
            break;
        case Boundary::PeriodicOn: {
            os << "# boundary periodic-on " << box.periodic_vertices().size();
            for (uint32_t v : box.periodic_vertices()) os << " " << v;
            os << "\n";
            break;
        }
    }
}

void write_events(std::ostream& os, const Configuration& config, const SpaceTimeBox& box) {
    os << "# directed " << (config.directed ? 1 : 0) << "\n";
    for (uint32_t v = 0; v < config.cuts.size(); ++v)
        for (double t : config.cuts[v]) os << "CUT " << v << " " << format_double(t) << "\n";
    const Graph& g = box.graph();
    for (const auto& [key, times] : config.bridges) {
        uint32_t from, to;
        if (config.directed) {
            const auto [x, y] = g.edge_endpoints(key / 2);
            from = (key & 1) == 0 ? x : y;
            to = (key & 1) == 0 ? y : x;
        } else {
            std::tie(from, to) = g.edge_endpoints(key);
        }
        for (double t : times)
            os << "BRIDGE " << from << " " << to << " " << format_double(t) << "\n";
    }
}

struct LineReader {
    std::istream& is;
    uint64_t line_no = 0;

    bool next(std::string& line) {
        while (std::getline(is, line)) {
            ++line_no;
            if (!line.empty()) return true;
        }
        return false;
    }

    [[noreturn]] void fail(const std::string& msg) const {
        throw IoError("line " + std::to_string(line_no) + ": " + msg);
    }
};

std::vector<std::string> tokens_of(const std::string& line) {
    std::istringstream iss(line);
    std::vector<std::string> out;
    std::string tok;
    while (iss >> tok) out.push_back(tok);
    return out;
}

uint64_t parse_u64(LineReader& r, const std::string& tok) {
    try {
        size_t pos = 0;
        const uint64_t v = std::stoull(tok, &pos);
        if (pos != tok.size()) r.fail("invalid integer '" + tok + "'");
        return v;
    } catch (const IoError&) {
        throw;
    } catch (...) {
        r.fail("invalid integer '" + tok + "'");
    }
}

struct ParsedHeader {
    SpaceTimeBox box;
    uint64_t seed = 0, replica = 0;
    bool directed = false;
    // checkpoint extras
    bool is_checkpoint = false;
    RcParams params;
    uint64_t sweep_index = 0;
    uint64_t rng_key = 0, rng_counter = 0;
};

// Reads header lines (starting with '#') until the first event line, which is
// passed back through `pending`.
ParsedHeader read_header(LineReader& r, std::string& pending, bool expect_checkpoint) {
    ParsedHeader h;
    std::string magic_line;
    if (!r.next(magic_line)) r.fail("empty input");
    const std::string magic = expect_checkpoint ? "# stperc-checkpoint 1" : "# stperc-config 1";
    if (magic_line != magic) r.fail("expected '" + magic + "'");
    h.is_checkpoint = expect_checkpoint;

    Graph graph;
    bool have_graph = false, have_time = false, have_boundary = false;
    double time_length = 0.0;
    int boundary_kind = -1;
    std::vector<uint32_t> periodic;

    std::string line;
    std::vector<std::pair<uint32_t, uint32_t>> edges;
    uint32_t n_vertices = 0;
    uint64_t n_edges = 0;
    bool complete = false;

    while (r.next(line)) {
        if (line.rfind("# ", 0) != 0) {
            pending = line;
            break;
        }
        const auto toks = tokens_of(line);
        const std::string& kind = toks[1];
        if (kind == "seed") {
            if (toks.size() != 4) r.fail("seed line needs two values");
            h.seed = parse_u64(r, toks[2]);
            h.replica = parse_u64(r, toks[3]);
        } else if (kind == "graph") {
            if (toks.size() < 4) r.fail("malformed graph line");
            n_vertices = static_cast<uint32_t>(parse_u64(r, toks[3]));
            if (toks[2] == "complete") {
                complete = true;
            } else if (toks[2] == "edges") {
                if (toks.size() != 5) r.fail("graph edges line needs vertex and edge counts");
                n_edges = parse_u64(r, toks[4]);
            } else {
                r.fail("unknown graph form '" + toks[2] + "'");
            }
            have_graph = true;
        } else if (kind == "E") {
            if (toks.size() != 4) r.fail("edge line needs two endpoints");
            edges.emplace_back(static_cast<uint32_t>(parse_u64(r, toks[2])),
                               static_cast<uint32_t>(parse_u64(r, toks[3])));
        } else if (kind == "time") {
            if (toks.size() != 3) r.fail("time line needs one value");
            time_length = parse_double(toks[2]);
            have_time = true;
        } else if (kind == "boundary") {
            if (toks.size() < 3) r.fail("malformed boundary line");
            if (toks[2] == "free") {
                boundary_kind = 0;
            } else if (toks[2] == "periodic-all") {
                boundary_kind = 1;
            } else if (toks[2] == "periodic-on") {
                boundary_kind = 2;
                if (toks.size() < 4) r.fail("periodic-on needs a count");
                const uint64_t k = parse_u64(r, toks[3]);
                if (toks.size() != 4 + k) r.fail("periodic-on vertex count mismatch");
                for (uint64_t i = 0; i < k; ++i)
                    periodic.push_back(static_cast<uint32_t>(parse_u64(r, toks[4 + i])));
            } else {
                r.fail("unknown boundary '" + toks[2] + "'");
            }
            have_boundary = true;
        } else if (kind == "directed") {
            if (toks.size() != 3) r.fail("directed line needs one flag");
            h.directed = parse_u64(r, toks[2]) != 0;
        } else if (kind == "params") {
            if (toks.size() != 7) r.fail("params line needs five values");
            h.params.lambda = parse_double(toks[2]);
            h.params.delta = parse_double(toks[3]);
            h.params.q = static_cast<uint32_t>(parse_u64(r, toks[4]));
            h.params.sweeps = parse_u64(r, toks[5]);
            h.params.burnin = parse_u64(r, toks[6]);
        } else if (kind == "sweep") {
            if (toks.size() != 3) r.fail("sweep line needs one value");
            h.sweep_index = parse_u64(r, toks[2]);
        } else if (kind == "rng") {
            if (toks.size() != 4) r.fail("rng line needs two values");
            h.rng_key = parse_u64(r, toks[2]);
            h.rng_counter = parse_u64(r, toks[3]);
        } else {
            r.fail("unknown header line '" + kind + "'");
        }
    }
    if (!have_graph || !have_time || !have_boundary) r.fail("incomplete header");

    if (complete)
        graph = Graph::complete(n_vertices);
    else if (edges.size() != n_edges)
        r.fail("edge list does not match the declared edge count");
    else
        graph = Graph::from_edges(n_vertices, edges);

    if (boundary_kind == 0)
        h.box = SpaceTimeBox(graph, time_length, Boundary::Free);
    else if (boundary_kind == 1)
        h.box = SpaceTimeBox(graph, time_length, Boundary::PeriodicAll);
    else
        h.box = SpaceTimeBox(graph, time_length, periodic);
    return h;
}

}  // namespace

void write_configuration(std::ostream& os, const Configuration& config,
                         const SpaceTimeBox& box, uint64_t seed, uint64_t replica) {
    validate_configuration(config, box);
    os << "# stperc-config 1\n";
    os << "# seed " << seed << " " << replica << "\n";
    write_box_header(os, box);
    write_events(os, config, box);
}

std::string configuration_to_string(const Configuration& config, const SpaceTimeBox& box,
                                    uint64_t seed, uint64_t replica) {
    std::ostringstream oss;
    write_configuration(oss, config, box, seed, replica);
    return oss.str();
}

namespace {

// Shared event parsing for configs and checkpoints.
void read_events(LineReader& r, std::string first, ParsedHeader& h, Configuration& config,
                 SpinField* spins) {
    const Graph& g = h.box.graph();
    config.vertex_count = g.vertex_count();
    config.directed = h.directed;
    config.cuts.resize(g.vertex_count());

    std::string line = std::move(first);
    bool have_line = !line.empty();
    while (have_line) {
        const auto toks = tokens_of(line);
        if (toks[0] == "CUT") {
            if (toks.size() != 3) r.fail("CUT needs vertex and time");
            const uint32_t v = static_cast<uint32_t>(parse_u64(r, toks[1]));
            if (v >= config.cuts.size()) r.fail("CUT vertex out of range");
            config.cuts[v].push_back(parse_double(toks[2]));
        } else if (toks[0] == "BRIDGE") {
            if (toks.size() != 4) r.fail("BRIDGE needs two vertices and a time");
            const uint32_t from = static_cast<uint32_t>(parse_u64(r, toks[1]));
            const uint32_t to = static_cast<uint32_t>(parse_u64(r, toks[2]));
            const double t = parse_double(toks[3]);
            uint64_t key;
            try {
                const uint64_t e = g.edge_id(from, to);
                key = h.directed ? 2 * e + (from < to ? 0 : 1) : e;
            } catch (const InvalidParameter& ex) {
                r.fail(ex.what());
            }
            config.bridges[key].push_back(t);
        } else if (toks[0] == "SPIN") {
            if (!spins) r.fail("SPIN record outside a checkpoint");
            if (toks.size() != 5) r.fail("SPIN needs vertex, start, end, value");
            const uint32_t v = static_cast<uint32_t>(parse_u64(r, toks[1]));
            if (v >= g.vertex_count()) r.fail("SPIN vertex out of range");
            const double a = parse_double(toks[2]);
            const double b = parse_double(toks[3]);
            const uint32_t s = static_cast<uint32_t>(parse_u64(r, toks[4]));
            const double T = h.box.time_length();
            SpinPiece piece;
            piece.spin = s;
            piece.start = a;
            if (a == b) {
                piece.length = T;
                piece.full_circle = true;
            } else if (b < a) {
                piece.length = (T - a) + b;
                piece.wraps = true;
            } else {
                piece.length = b - a;
            }
            if (spins->lines.size() < g.vertex_count()) spins->lines.resize(g.vertex_count());
            spins->lines[v].push_back(piece);
        } else {
            r.fail("unknown record '" + toks[0] + "'");
        }
        have_line = r.next(line);
    }
}

}  // namespace

LoadedConfiguration read_configuration(std::istream& is) {
    LineReader r{is};
    std::string pending;
    ParsedHeader h = read_header(r, pending, false);
    LoadedConfiguration out;
    read_events(r, pending, h, out.config, nullptr);
    out.box = std::move(h.box);
    out.seed = h.seed;
    out.replica = h.replica;
    validate_configuration(out.config, out.box);
    return out;
}

void write_checkpoint(std::ostream& os, const RcState& state) {
    validate_configuration(state.config, state.box);
    os << "# stperc-checkpoint 1\n";
    os << "# params " << format_double(state.params.lambda) << " "
       << format_double(state.params.delta) << " " << state.params.q << " "
       << state.params.sweeps << " " << state.params.burnin << "\n";
    os << "# sweep " << state.sweep_index << "\n";
    os << "# rng " << state.stream.key() << " " << state.stream.counter() << "\n";
    write_box_header(os, state.box);
    write_events(os, state.config, state.box);
    const double T = state.box.time_length();
    for (uint32_t v = 0; v < state.spins.lines.size(); ++v) {
        const auto& pieces = state.spins.lines[v];
        for (size_t i = 0; i < pieces.size(); ++i) {
            const SpinPiece& p = pieces[i];
            // Piece ends are written from the neighboring boundaries, not
            // from start+length, so repeated save/load cycles are stable.
            double b;
            if (p.full_circle)
                b = p.start;
            else if (i + 1 < pieces.size())
                b = pieces[i + 1].start;
            else
                b = p.wraps ? pieces[0].start : T;
            os << "SPIN " << v << " " << format_double(p.start) << " " << format_double(b)
               << " " << p.spin << "\n";
        }
    }
}

std::string checkpoint_to_string(const RcState& state) {
    std::ostringstream oss;
    write_checkpoint(oss, state);
    return oss.str();
}

RcState read_checkpoint(std::istream& is) {
    LineReader r{is};
    std::string pending;
    ParsedHeader h = read_header(r, pending, true);
    RcState state;
    state.spins.q = h.params.q;
    state.spins.time_length = h.box.time_length();
    read_events(r, pending, h, state.config, &state.spins);
    state.box = std::move(h.box);
    state.params = h.params;
    state.sweep_index = h.sweep_index;
    state.stream = RngStream::restore(h.rng_key, h.rng_counter);
    if (state.spins.lines.size() < state.box.graph().vertex_count())
        state.spins.lines.resize(state.box.graph().vertex_count());
    validate_rc_params(state.params);
    validate_configuration(state.config, state.box);
    for (const auto& pieces : state.spins.lines) {
        if (pieces.empty()) throw IoError("checkpoint: a line has no spin pieces");
        for (size_t i = 1; i < pieces.size(); ++i)
            if (!(pieces[i].start > pieces[i - 1].start))
                throw IoError("checkpoint: spin pieces out of order");
    }
    return state;
}

void save_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << content;
    if (!out) throw IoError("write failed for '" + path + "'");
}

std::string load_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "'");
    std::ostringstream oss;
    oss << in.rdbuf();
    return oss.str();
}

}  // namespace stperc
