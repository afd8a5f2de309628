#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "postsel/counting.hpp"
#include "postsel/scenario.hpp"

namespace postsel {

using OrderedJson = nlohmann::ordered_json;

namespace detail {

inline OrderedJson cx_to_json(Cx z) { return OrderedJson::array({z.real(), z.imag()}); }

inline Cx cx_from_json(const OrderedJson& j) {
    if (!j.is_array() || j.size() != 2)
        fail(Errc::NotFound, "complex numbers are encoded as [re, im]");
    return Cx(j[0].get<double>(), j[1].get<double>());
}

inline OrderedJson ket_to_json(const Ket& k) {
    OrderedJson arr = OrderedJson::array();
    for (int i = 0; i < k.dim(); ++i) arr.push_back(cx_to_json(k.amp(i)));
    return arr;
}

inline Vector vector_from_json(const OrderedJson& j) {
    Vector v(j.size());
    for (size_t i = 0; i < j.size(); ++i) v[static_cast<Eigen::Index>(i)] = cx_from_json(j[i]);
    return v;
}

inline OrderedJson element_to_json(const CircuitElement& el) {
    OrderedJson j;
    if (const auto* u = std::get_if<UnitaryOnPath>(&el)) {
        j["kind"] = "unitary";
        j["path"] = u->path;
        OrderedJson rows = OrderedJson::array();
        for (int r = 0; r < u->op.dim(); ++r) {
            OrderedJson row = OrderedJson::array();
            for (int c = 0; c < u->op.dim(); ++c) row.push_back(cx_to_json(u->op.matrix()(r, c)));
            rows.push_back(row);
        }
        j["matrix"] = rows;
    } else if (const auto* a = std::get_if<Attenuator>(&el)) {
        j["kind"] = "attenuator";
        j["path"] = a->path;
        j["T"] = a->transmission;
    } else if (const auto* s = std::get_if<Shutter>(&el)) {
        j["kind"] = "shutter";
        j["path"] = s->path;
    } else if (const auto* js = std::get_if<JointShutter>(&el)) {
        j["kind"] = "joint_shutter";
        j["labels"] = js->labels;
    }
    return j;
}

inline CircuitElement element_from_json(const OrderedJson& j, const Circuit& circuit) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "unitary") {
        if (!circuit.internal)
            fail(Errc::SpaceMismatch, "unitary element needs internal_dim");
        const auto& rows = j.at("matrix");
        const int d = circuit.internal->dim();
        if (static_cast<int>(rows.size()) != d)
            fail(Errc::SpaceMismatch, "unitary matrix has wrong shape");
        Matrix m(d, d);
        for (int r = 0; r < d; ++r)
            for (int c = 0; c < d; ++c) m(r, c) = cx_from_json(rows[r][c]);
        return UnitaryOnPath{j.at("path").get<int>(), Operator(*circuit.internal, std::move(m))};
    }
    if (kind == "attenuator")
        return Attenuator{j.at("path").get<int>(), j.at("T").get<double>()};
    if (kind == "shutter")
        return Shutter{j.at("path").get<int>()};
    if (kind == "joint_shutter")
        return JointShutter{j.at("labels").get<std::vector<std::vector<std::string>>>()};
    fail(Errc::NotFound, "unknown element kind '" + kind + "'");
}

}  // namespace detail

inline OrderedJson scenario_to_json(const ScenarioSpec& s) {
    OrderedJson j;
    j["name"] = s.name;
    j["documentation"] = s.documentation;
    j["selection_dim"] = s.circuit.selection.dim();
    j["selection_factors"] = s.circuit.selection.factors();
    j["pre"] = detail::ket_to_json(s.prepost.pre());
    j["post"] = detail::ket_to_json(s.prepost.post());
    if (s.circuit.internal) {
        if (s.circuit.internal->factor_count() != 1)
            fail(Errc::UnsupportedShape, "only single-factor internal spaces serialize");
        j["internal_dim"] = s.circuit.internal->dim();
        j["internal_labels"] = s.circuit.internal->factor(0);
    }
    if (s.visibility) j["visibility"] = *s.visibility;
    OrderedJson els = OrderedJson::array();
    for (const auto& el : s.circuit.elements) els.push_back(detail::element_to_json(el));
    j["elements"] = els;
    return j;
}

inline ScenarioSpec scenario_from_json(const OrderedJson& j) {
    const int dim = j.at("selection_dim").get<int>();
    Space selection = [&] {
        if (j.contains("selection_factors"))
            return Space(j["selection_factors"].get<std::vector<std::vector<std::string>>>());
        std::vector<std::string> labels;
        for (int i = 1; i <= dim; ++i) labels.push_back(std::to_string(i));
        return Space::single(labels);
    }();
    if (selection.dim() != dim)
        fail(Errc::SpaceMismatch, "selection_factors do not multiply to selection_dim");

    Circuit circuit{selection, std::nullopt, {}};
    if (j.contains("internal_dim")) {
        const int idim = j["internal_dim"].get<int>();
        std::vector<std::string> labels;
        if (j.contains("internal_labels"))
            labels = j["internal_labels"].get<std::vector<std::string>>();
        else
            for (int i = 0; i < idim; ++i) labels.push_back(std::to_string(i));
        if (static_cast<int>(labels.size()) != idim)
            fail(Errc::SpaceMismatch, "internal_labels do not match internal_dim");
        circuit.internal = Space::single(labels);
    }

    PrePost pp(Ket(selection, detail::vector_from_json(j.at("pre"))),
               Ket(selection, detail::vector_from_json(j.at("post"))));
    for (const auto& el : j.at("elements")) {
        circuit.elements.push_back(detail::element_from_json(el, circuit));
        // Validate the path reference up front rather than at evolve time.
        if (const auto* a = std::get_if<Attenuator>(&circuit.elements.back()))
            detail::check_path(circuit, a->path);
        else if (const auto* sh = std::get_if<Shutter>(&circuit.elements.back()))
            detail::check_path(circuit, sh->path);
        else if (const auto* u = std::get_if<UnitaryOnPath>(&circuit.elements.back()))
            detail::check_path(circuit, u->path);
        else if (const auto* js = std::get_if<JointShutter>(&circuit.elements.back()))
            for (const auto& parts : js->labels) selection.index_of(parts);
    }

    ScenarioSpec out{j.at("name").get<std::string>(),
                     std::move(pp),
                     std::move(circuit),
                     j.contains("documentation") ? j["documentation"].get<std::string>() : "",
                     std::nullopt};
    if (j.contains("visibility")) out.visibility = j["visibility"].get<double>();
    return out;
}

inline std::string scenario_to_string(const ScenarioSpec& s) {
    return scenario_to_json(s).dump(2) + "\n";
}

inline ScenarioSpec scenario_from_string(const std::string& text) {
    return scenario_from_json(OrderedJson::parse(text));
}

inline void save_scenario(const ScenarioSpec& s, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(Errc::NotFound, "cannot open '" + path + "' for writing");
    out << scenario_to_string(s);
}

inline ScenarioSpec load_scenario(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(Errc::NotFound, "cannot open scenario file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return scenario_from_string(buf.str());
}

}  // namespace postsel
