#ifndef APERIODIC_LAB_POINT_SET_HPP
#define APERIODIC_LAB_POINT_SET_HPP

#include <algorithm>
#include <cstddef>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "aperiodic_lab/point.hpp"
#include "aperiodic_lab/qnum.hpp"

namespace aplab {

using Json = nlohmann::ordered_json;

// Raised for malformed or invariant-violating point set data.
class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Finite sample X cap B(0, W) of a Delone set.  Points are sorted
// lexicographically, pairwise distinct, and inside the closed window ball.
class PointSet {
public:
    PointSet() = default;

    PointSet(std::size_t dimension, std::vector<Point> points, QNum window_radius, Json provenance = Json::object())
        : d_(dimension), points_(std::move(points)), window_(std::move(window_radius)),
          provenance_(std::move(provenance)) {
        if (d_ != 1 && d_ != 2) throw FormatError("dimension must be 1 or 2");
        if (qsign(window_) <= 0) throw FormatError("window radius must be positive");
        for (const auto& p : points_) {
            if (p.dimension() != d_) throw FormatError("point dimension does not match set dimension");
        }
        if (!std::is_sorted(points_.begin(), points_.end())) std::sort(points_.begin(), points_.end());
        if (std::adjacent_find(points_.begin(), points_.end()) != points_.end()) {
            throw FormatError("duplicate point in sample");
        }
        const QNum w2 = window_ * window_;
        for (const auto& p : points_) {
            if (norm_sq(p) > w2) throw FormatError("point outside the window ball");
        }
    }

    std::size_t dimension() const { return d_; }
    const std::vector<Point>& points() const { return points_; }
    std::size_t size() const { return points_.size(); }
    const Point& operator[](std::size_t i) const { return points_[i]; }
    const QNum& window_radius() const { return window_; }
    const Json& provenance() const { return provenance_; }

    // Index of p in the sample, or npos.
    std::size_t find(const Point& p) const {
        auto it = std::lower_bound(points_.begin(), points_.end(), p);
        if (it == points_.end() || *it != p) return npos;
        return static_cast<std::size_t>(it - points_.begin());
    }
    bool contains(const Point& p) const { return find(p) != npos; }

    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    Json to_json() const {
        Json j;
        j["dimension"] = d_;
        j["window_radius"] = window_.to_string();
        j["provenance"] = provenance_;
        Json pts = Json::array();
        for (const auto& p : points_) {
            Json row = Json::array();
            for (const auto& c : p.coords) row.push_back(c.to_string());
            pts.push_back(std::move(row));
        }
        j["points"] = std::move(pts);
        return j;
    }

    std::string serialize() const { return to_json().dump(1) + "\n"; }

    static PointSet from_json(const Json& j) {
        try {
            const auto d = j.at("dimension").get<std::size_t>();
            QNum w = QNum::parse(j.at("window_radius").get<std::string>());
            std::vector<Point> pts;
            pts.reserve(j.at("points").size());
            for (const auto& row : j.at("points")) {
                Point p;
                for (const auto& c : row) p.coords.push_back(QNum::parse(c.get<std::string>()));
                pts.push_back(std::move(p));
            }
            Json prov = j.contains("provenance") ? j.at("provenance") : Json::object();
            for (std::size_t i = 1; i < pts.size(); ++i) {
                if (!(pts[i - 1] < pts[i])) throw FormatError("points are not in canonical sorted order");
            }
            return PointSet(d, std::move(pts), std::move(w), std::move(prov));
        } catch (const FormatError&) {
            throw;
        } catch (const std::exception& e) {
            throw FormatError(std::string("malformed point set: ") + e.what());
        }
    }

    static PointSet parse(const std::string& text) {
        Json j;
        try {
            j = Json::parse(text);
        } catch (const std::exception& e) {
            throw FormatError(std::string("point set is not valid JSON: ") + e.what());
        }
        return from_json(j);
    }

    static PointSet load(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw FormatError("cannot open point set file: " + path);
        std::stringstream ss;
        ss << in.rdbuf();
        return parse(ss.str());
    }

    void save(const std::string& path) const {
        std::ofstream out(path, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write " + path);
        out << serialize();
    }

    friend bool operator==(const PointSet& x, const PointSet& y) {
        return x.d_ == y.d_ && x.window_ == y.window_ && x.points_ == y.points_ && x.provenance_ == y.provenance_;
    }

private:
    std::size_t d_ = 1;
    std::vector<Point> points_;
    QNum window_ = 1;
    Json provenance_ = Json::object();
};

}  // namespace aplab

#endif  // APERIODIC_LAB_POINT_SET_HPP
