#include "vanet/contact.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace vanet {

void validate(const EngineConfig& cfg)
{
    if (!(cfg.radio_range > 0.0)) throw ValidationError("engine.radio_range must be > 0");
    if (!(cfg.tick_dt > 0.0)) throw ValidationError("engine.tick_dt must be > 0");
    if (!(cfg.duration > 0.0)) throw ValidationError("engine.duration must be > 0");
}

namespace {

Encounter make_encounter(const Vehicle& p, const Vehicle& q, double time)
{
    const Vehicle& a = raw(p.id) < raw(q.id) ? p : q;
    const Vehicle& b = raw(p.id) < raw(q.id) ? q : p;
    return {time, a.id, b.id, a.position, b.position};
}

void sort_encounters(std::vector<Encounter>& out)
{
    std::sort(out.begin(), out.end(), [](const Encounter& l, const Encounter& r) {
        if (l.a_id != r.a_id) return raw(l.a_id) < raw(r.a_id);
        return raw(l.b_id) < raw(r.b_id);
    });
}

}  // namespace

std::vector<Encounter> detect_contacts_naive(std::span<const Vehicle> vehicles, double radio_range,
                                             double time)
{
    std::vector<Encounter> out;
    for (std::size_t i = 0; i < vehicles.size(); ++i) {
        for (std::size_t j = i + 1; j < vehicles.size(); ++j) {
            if (in_range(vehicles[i].position, vehicles[j].position, radio_range)) {
                out.push_back(make_encounter(vehicles[i], vehicles[j], time));
            }
        }
    }
    sort_encounters(out);
    return out;
}

std::vector<Encounter> detect_contacts(std::span<const Vehicle> vehicles, double radio_range,
                                       double time)
{
    std::vector<Encounter> out;
    if (vehicles.size() < 2) return out;

    double min_x = std::numeric_limits<double>::max();
    double min_y = std::numeric_limits<double>::max();
    double max_x = std::numeric_limits<double>::lowest();
    double max_y = std::numeric_limits<double>::lowest();
    for (const auto& v : vehicles) {
        min_x = std::min(min_x, v.position.x);
        min_y = std::min(min_y, v.position.y);
        max_x = std::max(max_x, v.position.x);
        max_y = std::max(max_y, v.position.y);
    }

    // Cells are radio_range wide unless that would allocate far more cells
    // than vehicles; any cell at least radio_range wide keeps the 3x3
    // neighbourhood search exact.
    double cell = radio_range;
    const double cell_budget = 4.0 * static_cast<double>(vehicles.size()) + 16.0;
    const double area_cells = (std::floor((max_x - min_x) / cell) + 1.0) *
                              (std::floor((max_y - min_y) / cell) + 1.0);
    if (area_cells > cell_budget) cell *= std::sqrt(area_cells / cell_budget);

    const auto cell_of = [&](double value, double origin) {
        return static_cast<std::size_t>(std::floor((value - origin) / cell));
    };
    const std::size_t cols = cell_of(max_x, min_x) + 1;
    const std::size_t rows = cell_of(max_y, min_y) + 1;

    // Counting sort of vehicle indices into cells.
    std::vector<std::size_t> cell_index(vehicles.size());
    std::vector<std::size_t> start(cols * rows + 1, 0);
    for (std::size_t i = 0; i < vehicles.size(); ++i) {
        const std::size_t c = cell_of(vehicles[i].position.y, min_y) * cols +
                              cell_of(vehicles[i].position.x, min_x);
        cell_index[i] = c;
        ++start[c + 1];
    }
    for (std::size_t c = 0; c < cols * rows; ++c) start[c + 1] += start[c];
    std::vector<std::size_t> members(vehicles.size());
    {
        std::vector<std::size_t> fill(start.begin(), start.end() - 1);
        for (std::size_t i = 0; i < vehicles.size(); ++i) members[fill[cell_index[i]]++] = i;
    }

    for (std::size_t i = 0; i < vehicles.size(); ++i) {
        const std::size_t cx = cell_index[i] % cols;
        const std::size_t cy = cell_index[i] / cols;
        for (std::size_t ny = (cy == 0 ? 0 : cy - 1); ny <= std::min(cy + 1, rows - 1); ++ny) {
            for (std::size_t nx = (cx == 0 ? 0 : cx - 1); nx <= std::min(cx + 1, cols - 1); ++nx) {
                const std::size_t c = ny * cols + nx;
                for (std::size_t k = start[c]; k < start[c + 1]; ++k) {
                    const std::size_t j = members[k];
                    if (j <= i) continue;
                    if (in_range(vehicles[i].position, vehicles[j].position, radio_range)) {
                        out.push_back(make_encounter(vehicles[i], vehicles[j], time));
                    }
                }
            }
        }
    }
    sort_encounters(out);
    return out;
}

}  // namespace vanet
