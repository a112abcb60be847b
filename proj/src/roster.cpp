#include "fatigue/roster.hpp"

#include <algorithm>
#include <cctype>

#include <nlohmann/json.hpp>

#include "fatigue/csv.hpp"

namespace fatigue {

namespace {

// Lower-case with separators removed so "Home Standby" == "home_standby".
std::string normalize_token(std::string_view s) {
    std::string out;
    for (char c : s) {
        if (c == ' ' || c == '_' || c == '-') continue;
        out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
    return out;
}

std::string trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return std::string(s);
}

const std::vector<std::string>& field_order() {
    static const std::vector<std::string> order = {"id",     "kind",        "subkind",
                                                   "start",  "end",         "origin",
                                                   "destination", "duty_start", "duty_end",
                                                   "rank"};
    return order;
}

}  // namespace

std::string_view to_string(EventKind k) {
    return k == EventKind::Crewing ? "Crewing" : "Working";
}

std::string_view to_string(EventSubkind k) {
    switch (k) {
        case EventSubkind::Flight: return "Flight";
        case EventSubkind::HomeStandby: return "HomeStandby";
        case EventSubkind::Training: return "Training";
        case EventSubkind::Deadhead: return "Deadhead";
        case EventSubkind::Other: return "Other";
    }
    return "Other";
}

std::string_view to_string(Rank r) {
    switch (r) {
        case Rank::Captain: return "Captain";
        case Rank::FirstOfficer: return "FirstOfficer";
        case Rank::CabinCrew: return "CabinCrew";
        case Rank::Unknown: return "Unknown";
    }
    return "Unknown";
}

std::string_view to_string(RejectReason r) {
    switch (r) {
        case RejectReason::None: return "None";
        case RejectReason::ParseError: return "ParseError";
        case RejectReason::OverlapConflict: return "OverlapConflict";
        case RejectReason::EmptyAfterFilter: return "EmptyAfterFilter";
    }
    return "None";
}

std::optional<EventKind> parse_event_kind(std::string_view s) {
    const auto t = normalize_token(s);
    if (t == "crewing") return EventKind::Crewing;
    if (t == "working") return EventKind::Working;
    return std::nullopt;
}

std::optional<EventSubkind> parse_event_subkind(std::string_view s) {
    const auto t = normalize_token(s);
    if (t == "flight") return EventSubkind::Flight;
    if (t == "homestandby") return EventSubkind::HomeStandby;
    if (t == "training") return EventSubkind::Training;
    if (t == "deadhead") return EventSubkind::Deadhead;
    if (t == "other") return EventSubkind::Other;
    return std::nullopt;
}

std::optional<Rank> parse_rank(std::string_view s) {
    const auto t = normalize_token(s);
    if (t.empty() || t == "unknown") return Rank::Unknown;
    if (t == "captain") return Rank::Captain;
    if (t == "firstofficer") return Rank::FirstOfficer;
    if (t == "cabincrew") return Rank::CabinCrew;
    return std::nullopt;
}

Epoch Epoch::make(std::string label, Minute begin, int days) {
    return Epoch{std::move(label), begin, begin + days * kMinutesPerDay, days};
}

std::vector<Epoch> standard_epochs_30d() {
    return {
        Epoch::make("Jan-19", make_timestamp(2019, 1, 1), 30),
        Epoch::make("Feb-19", make_timestamp(2019, 1, 31), 30),
        Epoch::make("Mar-19", make_timestamp(2019, 3, 2), 30),
        Epoch::make("Apr-19", make_timestamp(2019, 4, 1), 30),
        Epoch::make("May-19", make_timestamp(2019, 5, 1), 30),
        Epoch::make("Jun-19", make_timestamp(2019, 5, 31), 30),
        Epoch::make("Jul-19", make_timestamp(2019, 7, 1), 30),
        Epoch::make("Aug-19", make_timestamp(2019, 8, 1), 30),
        Epoch::make("Sep-19", make_timestamp(2019, 8, 31), 30),
        Epoch::make("Oct-19", make_timestamp(2019, 10, 1), 30),
        Epoch::make("Nov-19", make_timestamp(2019, 10, 31), 30),
        Epoch::make("Dec-19", make_timestamp(2019, 12, 1), 30),
        Epoch::make("Jan-20", make_timestamp(2020, 1, 1), 30),
        Epoch::make("Feb-20", make_timestamp(2020, 1, 31), 30),
    };
}

std::vector<Epoch> standard_epochs_15d() {
    return {
        Epoch::make("Mar-19 (1/2)", make_timestamp(2019, 3, 1), 15),
        Epoch::make("Mar-20 (1/2)", make_timestamp(2020, 3, 1), 15),
    };
}

ColumnMap ColumnMap::defaults() {
    ColumnMap m;
    for (const auto& f : field_order()) m.columns[f] = f;
    return m;
}

const std::string& ColumnMap::header_for(const std::string& field) const {
    static const std::string none;
    auto it = columns.find(field);
    return it == columns.end() ? none : it->second;
}

ParseResult parse_roster_csv(std::string_view text, const ColumnMap& schema) {
    ParseResult result;
    const auto ls = csv::lines(text);

    std::size_t header_line = 0;
    while (header_line < ls.size() && ls[header_line].empty()) ++header_line;
    if (header_line == ls.size()) throw SchemaError(schema.header_for("id"));

    const auto header = csv::split_line(ls[header_line]);
    std::map<std::string, int> index;
    for (const auto& field : field_order()) {
        const auto& name = schema.header_for(field);
        int found = -1;
        for (std::size_t i = 0; i < header.size(); ++i)
            if (!name.empty() && trim(header[i]) == name) found = static_cast<int>(i);
        index[field] = found;
    }
    for (const char* mandatory : {"id", "kind", "start", "end"}) {
        if (index[mandatory] < 0) {
            const auto& name = schema.header_for(mandatory);
            throw SchemaError(name.empty() ? std::string(mandatory) : name);
        }
    }

    for (std::size_t li = header_line + 1; li < ls.size(); ++li) {
        if (ls[li].empty()) continue;
        const std::size_t row = li + 1;
        const auto fields = csv::split_line(ls[li]);
        auto get = [&](const char* f) -> std::string {
            const int i = index[f];
            if (i < 0 || i >= static_cast<int>(fields.size())) return {};
            return trim(fields[static_cast<std::size_t>(i)]);
        };
        auto diag = [&](std::string crew, std::string field, std::string reason) {
            result.diagnostics.push_back({row, std::move(crew), std::move(field), std::move(reason)});
        };

        const std::string id = get("id");
        if (fields.size() != header.size()) {
            diag(id, "row", "expected " + std::to_string(header.size()) + " fields, got " +
                                std::to_string(fields.size()));
            continue;
        }
        if (id.empty()) {
            diag(id, "id", "empty identifier");
            continue;
        }
        RosterEvent ev;
        ev.crew_id = id;

        const auto kind = parse_event_kind(get("kind"));
        if (!kind) {
            diag(id, "kind", "unknown event kind '" + get("kind") + "'");
            continue;
        }
        ev.kind = *kind;

        const std::string sub = get("subkind");
        if (sub.empty()) {
            ev.subkind = ev.kind == EventKind::Crewing ? EventSubkind::Flight : EventSubkind::Other;
        } else if (auto sk = parse_event_subkind(sub)) {
            ev.subkind = *sk;
        } else {
            diag(id, "subkind", "unknown event subkind '" + sub + "'");
            continue;
        }

        const auto start = parse_timestamp(get("start"));
        if (!start) {
            diag(id, "start", "unparseable timestamp '" + get("start") + "'");
            continue;
        }
        const auto end = parse_timestamp(get("end"));
        if (!end) {
            diag(id, "end", "unparseable timestamp '" + get("end") + "'");
            continue;
        }
        ev.start = *start;
        ev.end = *end;
        if (ev.end < ev.start) {
            diag(id, "end", "negative duration");
            continue;
        }
        if (ev.end == ev.start) {
            diag(id, "end", "zero duration");
            continue;
        }

        ev.origin = get("origin");
        ev.destination = get("destination");
        if (ev.kind == EventKind::Crewing && (ev.origin.empty() || ev.destination.empty())) {
            diag(id, ev.origin.empty() ? "origin" : "destination", "missing location for Crewing event");
            continue;
        }

        bool bad = false;
        for (const char* f : {"duty_start", "duty_end"}) {
            const std::string raw = get(f);
            if (raw.empty()) continue;
            const auto ts = parse_timestamp(raw);
            if (!ts) {
                diag(id, f, "unparseable timestamp '" + raw + "'");
                bad = true;
                break;
            }
            (std::string_view(f) == "duty_start" ? ev.duty_start : ev.duty_end) = *ts;
        }
        if (bad) continue;
        if (ev.duty_start && ev.duty_end && *ev.duty_end <= *ev.duty_start) {
            diag(id, "duty_end", "duty end not after duty start");
            continue;
        }

        const auto rank = parse_rank(get("rank"));
        if (!rank) {
            diag(id, "rank", "unknown rank '" + get("rank") + "'");
            continue;
        }
        ev.rank = *rank;
        result.events.push_back(std::move(ev));
    }

    std::stable_sort(result.events.begin(), result.events.end(),
                     [](const RosterEvent& a, const RosterEvent& b) {
                         if (a.crew_id != b.crew_id) return a.crew_id < b.crew_id;
                         return a.start < b.start;
                     });
    return result;
}

std::string serialize_roster_csv(std::span<const RosterEvent> events) {
    std::string out = csv::join(field_order());
    out.push_back('\n');
    auto ts = [](const std::optional<Minute>& t) { return t ? format_timestamp(*t) : std::string{}; };
    for (const auto& e : events) {
        out += csv::join({e.crew_id, std::string(to_string(e.kind)), std::string(to_string(e.subkind)),
                          format_timestamp(e.start), format_timestamp(e.end), e.origin, e.destination,
                          ts(e.duty_start), ts(e.duty_end), std::string(to_string(e.rank))});
        out.push_back('\n');
    }
    return out;
}

std::string diagnostics_to_jsonl(std::span<const ParseDiagnostic> diagnostics) {
    std::string out;
    for (const auto& d : diagnostics) {
        nlohmann::ordered_json j;
        j["row"] = d.row;
        j["crew_id"] = d.crew_id;
        j["field"] = d.field;
        j["reason"] = d.reason;
        out += j.dump();
        out.push_back('\n');
    }
    return out;
}

ValidatedRoster apply_filters(std::span<const RosterEvent> events, const Epoch& epoch,
                              const FilterPolicy& policy) {
    ValidatedRoster out;
    out.epoch = epoch;
    if (!events.empty()) out.crew_id = events.front().crew_id;

    for (const auto& e : events) {
        if (policy.drop_home_standby && e.subkind == EventSubkind::HomeStandby) continue;
        if (e.end <= epoch.begin || e.start >= epoch.end) continue;
        RosterEvent c = e;
        c.start = std::max(c.start, epoch.begin);
        c.end = std::min(c.end, epoch.end);
        if (c.duty_start) c.duty_start = std::clamp(*c.duty_start, epoch.begin, epoch.end);
        if (c.duty_end) c.duty_end = std::clamp(*c.duty_end, epoch.begin, epoch.end);
        out.events.push_back(std::move(c));
    }

    if (out.events.empty()) {
        out.rejected = true;
        out.reject_reason = RejectReason::EmptyAfterFilter;
        return out;
    }

    // Any two retained events sharing a minute make the roster inconsistent.
    Minute reach = out.events.front().start;
    for (const auto& e : out.events) {
        if (e.start < reach) {
            out.rejected = true;
            out.reject_reason = RejectReason::OverlapConflict;
            return out;
        }
        reach = std::max(reach, e.end);
    }
    return out;
}

AirportTable AirportTable::from_csv(std::string_view text, std::string home_country) {
    AirportTable t(std::move(home_country));
    const auto table = csv::parse_table(text);
    const int code = table.column("code");
    const int country = table.column("country");
    if (code < 0 || country < 0) throw std::runtime_error("airport table needs code,country columns");
    for (const auto& row : table.rows)
        t.add(trim(row[static_cast<std::size_t>(code)]), trim(row[static_cast<std::size_t>(country)]));
    return t;
}

void AirportTable::add(std::string code, std::string country) { country_[std::move(code)] = std::move(country); }

bool AirportTable::is_domestic(std::string_view code) const {
    auto it = country_.find(code);
    return it == country_.end() || it->second == home_;
}

std::pair<Minute, Minute> default_duty_bounds(const RosterEvent& event, const DutyPolicy& policy) {
    const Minute release = policy.airports.is_domestic(event.destination) ? policy.release_domestic
                                                                          : policy.release_international;
    return {event.duty_start.value_or(event.start - policy.report_before),
            event.duty_end.value_or(event.end + release)};
}

Interval duty_bounds(const RosterEvent& event, const DutyPolicy& policy) {
    Interval d;
    if (event.kind == EventKind::Crewing) {
        auto [s, e] = default_duty_bounds(event, policy);
        d = {s, e};
    } else {
        d = {event.duty_start.value_or(event.start), event.duty_end.value_or(event.end)};
    }
    d.start = std::min(d.start, event.start);
    d.end = std::max(d.end, event.end);
    return d;
}

std::vector<Interval> duty_periods(const ValidatedRoster& roster, const DutyPolicy& policy) {
    std::vector<Interval> spans;
    spans.reserve(roster.events.size());
    for (const auto& e : roster.events) {
        Interval d = duty_bounds(e, policy);
        d.start = std::max(d.start, roster.epoch.begin);
        d.end = std::min(d.end, roster.epoch.end);
        if (!d.empty()) spans.push_back(d);
    }
    std::sort(spans.begin(), spans.end(), [](const Interval& a, const Interval& b) {
        return a.start < b.start || (a.start == b.start && a.end < b.end);
    });
    std::vector<Interval> merged;
    for (const auto& d : spans) {
        if (!merged.empty() && d.start <= merged.back().end)
            merged.back().end = std::max(merged.back().end, d.end);
        else
            merged.push_back(d);
    }
    return merged;
}

std::map<std::string, std::vector<RosterEvent>> group_by_crew(std::span<const RosterEvent> events) {
    std::map<std::string, std::vector<RosterEvent>> out;
    for (const auto& e : events) out[e.crew_id].push_back(e);
    for (auto& [id, evs] : out)
        std::stable_sort(evs.begin(), evs.end(),
                         [](const RosterEvent& a, const RosterEvent& b) { return a.start < b.start; });
    return out;
}

}  // namespace fatigue
