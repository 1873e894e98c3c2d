// Copyright 2026 the chaosbench authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "chaosbench/config_json.hpp"
#include "chaosbench/errors.hpp"
#include "chaosbench/io.hpp"
#include "chaosbench/training.hpp"

namespace chaosbench {

namespace {

void write_tensor(std::ostream& out, const Matrix& m) {
    out << "tensor " << m.rows() << ' ' << m.cols() << '\n';
    const auto v = m.values();
    for (std::size_t i = 0; i < v.size(); ++i) {
        out << (i == 0 ? "" : " ") << io::format_double(v[i]);
    }
    out << '\n';
}

class Reader {
public:
    explicit Reader(std::istream& in) : in_(in) {}

    std::string line() {
        std::string s;
        if (!std::getline(in_, s)) {
            throw FormatError("checkpoint: unexpected end of file after line " +
                              std::to_string(line_no_));
        }
        ++line_no_;
        return s;
    }

    /// Line starting with `key ` and its remainder.
    std::string keyed(const std::string& key) {
        std::string s = line();
        if (s.rfind(key + " ", 0) != 0) {
            throw FormatError("checkpoint line " + std::to_string(line_no_) + ": expected '" + key +
                              "'");
        }
        return s.substr(key.size() + 1);
    }

    std::vector<double> numbers(std::size_t expected) {
        std::string s = line();
        std::vector<double> out;
        out.reserve(expected);
        std::size_t pos = 0;
        while (pos < s.size()) {
            const std::size_t sp = s.find(' ', pos);
            const std::size_t end = sp == std::string::npos ? s.size() : sp;
            out.push_back(io::parse_double(std::string_view(s).substr(pos, end - pos), where()));
            pos = end + 1;
        }
        if (out.size() != expected) {
            throw FormatError(where() + ": expected " + std::to_string(expected) + " values, found " +
                              std::to_string(out.size()));
        }
        return out;
    }

    Matrix tensor() {
        std::istringstream hdr(keyed("tensor"));
        std::size_t rows = 0, cols = 0;
        if (!(hdr >> rows >> cols)) {
            throw FormatError(where() + ": bad tensor header");
        }
        return Matrix::from_rows(rows, cols, numbers(rows * cols));
    }

    std::string where() const { return "checkpoint line " + std::to_string(line_no_); }

private:
    std::istream& in_;
    std::size_t line_no_ = 0;
};

ParamList checked_tensors(Reader& r, const ParamList& expected_shapes) {
    const auto count = static_cast<std::size_t>(io::parse_int(r.keyed("tensors"), r.where()));
    if (count != expected_shapes.size()) {
        throw FormatError(r.where() + ": expected " + std::to_string(expected_shapes.size()) +
                          " tensors, found " + std::to_string(count));
    }
    ParamList out;
    for (const Matrix& shape : expected_shapes) {
        Matrix m = r.tensor();
        if (m.rows() != shape.rows() || m.cols() != shape.cols()) {
            throw FormatError(r.where() + ": tensor shape does not match the architecture");
        }
        out.push_back(std::move(m));
    }
    return out;
}

}  // namespace

void write_checkpoint(std::ostream& out, const Forecaster& model, const TrainConfig& cfg) {
    out << kCheckpointMagic << '\n';
    out << "model " << nlohmann::json(model.spec()).dump() << '\n';
    out << "train " << nlohmann::json(cfg).dump() << '\n';
    out << "trained " << (model.trained() ? 1 : 0) << '\n';

    if (const auto* net = dynamic_cast<const NeuralForecaster*>(&model)) {
        out << "tensors " << net->parameters().size() << '\n';
        for (const Matrix& m : net->parameters()) write_tensor(out, m);
    } else if (const auto* forest = dynamic_cast<const ForestModel*>(&model)) {
        const ForestParams& p = forest->params();
        out << "forest " << nlohmann::json(p.config).dump() << '\n';
        out << "trees " << p.trees.size() << ' ' << p.input_width << '\n';
        for (const Tree& t : p.trees) {
            out << "tree " << t.nodes.size() << '\n';
            for (const TreeNode& n : t.nodes) {
                out << n.feature << ' ' << io::format_double(n.threshold) << ' ' << n.left << ' '
                    << n.right << ' ' << io::format_double(n.value[0]) << ' '
                    << io::format_double(n.value[1]) << '\n';
            }
        }
    } else if (const auto* svr = dynamic_cast<const SvrModel*>(&model)) {
        const SvrParams& p = svr->params();
        out << "svr " << p.w.size() << ' ' << io::format_double(p.epsilon_tube) << ' '
            << io::format_double(p.reg_C) << ' ' << io::format_double(p.map_b) << '\n';
        write_tensor(out, Matrix::from_rows(1, p.w.size(), p.w));
        out << "bias " << io::format_double(p.bias) << '\n';
    }
    out << "end\n";
}

Checkpoint read_checkpoint(std::istream& in) {
    Reader r(in);
    std::string magic = r.line();
    if (!magic.empty() && magic.back() == '\r') magic.pop_back();
    if (magic != kCheckpointMagic) {
        throw FormatError("not a checkpoint: expected magic '" + std::string(kCheckpointMagic) +
                          "'");
    }
    Checkpoint ck;
    ModelSpec spec;
    try {
        spec = nlohmann::json::parse(r.keyed("model")).get<ModelSpec>();
        ck.train = nlohmann::json::parse(r.keyed("train")).get<TrainConfig>();
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(r.where() + ": " + e.what());
    }
    const bool trained = io::parse_int(r.keyed("trained"), r.where()) != 0;

    switch (spec.kind) {
        case ModelKind::fnn: {
            FnnConfig cfg;
            cfg.input_dim = 2 * spec.window;
            cfg.output = spec.fnn_output;
            FnnParams p = FnnParams::zeros(cfg);
            p.tensors = checked_tensors(r, p.tensors);
            ck.model = std::make_unique<FnnModel>(spec, std::move(p));
            break;
        }
        case ModelKind::rnn: {
            RnnParams p = RnnParams::zeros(rnn_profile(spec.profile));
            p.tensors = checked_tensors(r, p.tensors);
            ck.model = std::make_unique<RnnModel>(spec, std::move(p));
            break;
        }
        case ModelKind::lstm: {
            LstmParams p = LstmParams::zeros(lstm_profile(spec.profile));
            p.tensors = checked_tensors(r, p.tensors);
            ck.model = std::make_unique<LstmModel>(spec, std::move(p));
            break;
        }
        case ModelKind::forest: {
            ForestParams p;
            try {
                p.config = nlohmann::json::parse(r.keyed("forest")).get<ForestConfig>();
            } catch (const nlohmann::json::exception& e) {
                throw FormatError(r.where() + ": " + e.what());
            }
            std::istringstream hdr(r.keyed("trees"));
            std::size_t n_trees = 0;
            if (!(hdr >> n_trees >> p.input_width)) throw FormatError(r.where() + ": bad trees line");
            for (std::size_t t = 0; t < n_trees; ++t) {
                const auto n_nodes = static_cast<std::size_t>(io::parse_int(r.keyed("tree"), r.where()));
                Tree tree;
                for (std::size_t k = 0; k < n_nodes; ++k) {
                    const auto v = r.numbers(6);
                    TreeNode node;
                    node.feature = static_cast<std::int32_t>(v[0]);
                    node.threshold = v[1];
                    node.left = static_cast<std::uint32_t>(v[2]);
                    node.right = static_cast<std::uint32_t>(v[3]);
                    node.value = {v[4], v[5]};
                    if (!node.is_leaf() && (node.left >= n_nodes || node.right >= n_nodes ||
                                            static_cast<std::size_t>(node.feature) >= p.input_width)) {
                        throw FormatError(r.where() + ": tree node out of range");
                    }
                    tree.nodes.push_back(node);
                }
                p.trees.push_back(std::move(tree));
            }
            ck.model = std::make_unique<ForestModel>(spec, std::move(p));
            break;
        }
        case ModelKind::svr: {
            std::istringstream hdr(r.keyed("svr"));
            std::size_t width = 0;
            std::string eps, c, b;
            if (!(hdr >> width >> eps >> c >> b)) throw FormatError(r.where() + ": bad svr line");
            SvrParams p;
            p.epsilon_tube = io::parse_double(eps, r.where());
            p.reg_C = io::parse_double(c, r.where());
            p.map_b = io::parse_double(b, r.where());
            const Matrix w = r.tensor();
            if (w.size() != width) throw FormatError(r.where() + ": svr weight length mismatch");
            p.w.assign(w.values().begin(), w.values().end());
            p.bias = io::parse_double(r.keyed("bias"), r.where());
            ck.model = std::make_unique<SvrModel>(spec, std::move(p));
            break;
        }
    }
    std::string end = r.line();
    if (!end.empty() && end.back() == '\r') end.pop_back();
    if (end != "end") {
        throw FormatError(r.where() + ": expected 'end'");
    }
    if (trained) {
        ck.model->mark_trained();
    }
    return ck;
}

}  // namespace chaosbench
