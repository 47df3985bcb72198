#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "streamad/csv.hpp"
#include "streamad/ingest.hpp"
#include "streamad/prepared.hpp"
#include "toy_streams.hpp"

using namespace streamad;
namespace fs = std::filesystem;

namespace {

const std::string kHeader =
    "timestamp,processId,threadId,parentProcessId,userId,mountNamespace,processName,hostName,"
    "eventId,eventName,stackAddresses,argsNum,returnValue,args,sus,evil\n";

DatasetSplit parse(const std::string& text) {
    std::istringstream in(text);
    return load_split(in, "t");
}

fs::path temp_dir(const std::string& name) {
    auto dir = fs::temp_directory_path() / ("streamad_" + name + "_" + std::to_string(::getpid()));
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST(Csv, QuotedFieldsAndEscapes) {
    std::istringstream in("a,\"b,c\",\"d \"\"q\"\"\"\n\"multi\nline\",,x\r\n");
    csv::Reader r(in);
    std::vector<std::string> f;
    ASSERT_TRUE(r.next(f));
    EXPECT_EQ(f, (std::vector<std::string>{"a", "b,c", "d \"q\""}));
    ASSERT_TRUE(r.next(f));
    EXPECT_EQ(f, (std::vector<std::string>{"multi\nline", "", "x"}));
    EXPECT_FALSE(r.next(f));
}

TEST(Csv, EscapeRoundTrip) {
    for (std::string s : {"plain", "a,b", "q\"x", "n\nl", ""}) {
        std::istringstream in(csv::escape(s) + ",z\n");
        csv::Reader r(in);
        std::vector<std::string> f;
        ASSERT_TRUE(r.next(f));
        EXPECT_EQ(f, (std::vector<std::string>{s, "z"}));
    }
}

TEST(LoadSplit, ThreeRowFixture) {
    const auto split = load_split(fs::path(STREAMAD_FIXTURES) / "three_rows.csv", "train");
    ASSERT_EQ(split.events.size(), 3u);
    const auto& e = split.events[0];
    EXPECT_DOUBLE_EQ(e.timestamp, 1809.495787);
    EXPECT_EQ(e.processId, 381);
    EXPECT_EQ(e.threadId, 7337);
    EXPECT_EQ(e.parentProcessId, 1);
    EXPECT_EQ(e.userId, 100);
    EXPECT_EQ(e.mountNamespace, 4026532231);
    EXPECT_EQ(e.processName, "close");
    EXPECT_EQ(e.hostName, "ip-10-100-1-120");
    EXPECT_EQ(e.eventId, 157);
    EXPECT_EQ(e.eventName, "prctl");
    EXPECT_EQ(e.argsNum, 5);
    EXPECT_EQ(e.returnValue, 0);
    EXPECT_EQ(e.sus, 1);
    EXPECT_EQ(e.evil, 0);
    EXPECT_EQ(split.events[2].returnValue, -2);
    EXPECT_EQ(split.events[2].sus, 0);
    EXPECT_EQ(split.name, "train");
}

TEST(LoadSplit, ColumnOrderDoesNotMatter) {
    const std::string text =
        "evil,sus,returnValue,argsNum,eventName,eventId,hostName,processName,mountNamespace,"
        "userId,parentProcessId,threadId,processId,timestamp\n"
        "1,1,-1,2,socket,41,h,tsm,7,1001,9,8,10,3.5\n";
    const auto split = parse(text);
    ASSERT_EQ(split.events.size(), 1u);
    EXPECT_EQ(split.events[0].processId, 10);
    EXPECT_EQ(split.events[0].evil, 1);
    EXPECT_EQ(split.events[0].eventName, "socket");
}

TEST(LoadSplit, AcceptsBomAndFloatIntegers) {
    const auto split = parse("\xEF\xBB\xBF" + kHeader + "1.0,5.0,5,1,0,0,p,h,3,close,[],1,0,[],0,0\n\n");
    ASSERT_EQ(split.events.size(), 1u);
    EXPECT_EQ(split.events[0].processId, 5);
}

TEST(LoadSplit, Errors) {
    EXPECT_THROW(parse(""), EmptyFile);
    try {
        parse("timestamp,processId\n1,2\n");
        FAIL();
    } catch (const MissingColumn& e) {
        EXPECT_NE(std::string(e.what()).find("threadId"), std::string::npos);
    }
    try {
        parse(kHeader + "1,5,5,1,0,0,p,h,3,close,[],1,0,[],0,0\n" + "1,x,5,1,0,0,p,h,3,close,[],1,0,[],0,0\n");
        FAIL();
    } catch (const MalformedRow& e) {
        EXPECT_EQ(e.row(), 2u);
        EXPECT_NE(std::string(e.what()).find("processId"), std::string::npos);
    }
    EXPECT_THROW(parse(kHeader + "1,5,5,1,0,0,p,h,3,close,[],1,0,[],0\n"), MalformedRow);
    EXPECT_THROW(parse(kHeader + "1,5,5,1,0,0,p,h,3,close,[],1,0,[],2,0\n"), MalformedRow);
    EXPECT_THROW(parse(kHeader + "1,5.5,5,1,0,0,p,h,3,close,[],1,0,[],0,0\n"), MalformedRow);
    EXPECT_THROW(load_split(fs::path("/nonexistent/x.csv")), Error);
}

TEST(SortSplit, ByHostThenTimestampStable) {
    DatasetSplit s;
    auto ev = [](std::string host, double t, std::int64_t tag) {
        Event e;
        e.hostName = std::move(host);
        e.timestamp = t;
        e.eventId = tag;
        return e;
    };
    s.events = {ev("b", 2, 0), ev("a", 5, 1), ev("b", 1, 2), ev("a", 5, 3), ev("a", 4, 4)};
    const auto sorted = sort_split(s);
    std::vector<std::int64_t> tags;
    for (const auto& e : sorted.events) tags.push_back(e.eventId);
    EXPECT_EQ(tags, (std::vector<std::int64_t>{4, 1, 3, 2, 0}));
}

TEST(Enrich, ParentNamesFromEarlierEventsOnSameHost) {
    ProcessNameTable table;
    DatasetSplit s;
    auto ev = [](std::string host, std::int64_t pid, std::int64_t ppid, std::string name) {
        Event e;
        e.hostName = std::move(host);
        e.processId = pid;
        e.parentProcessId = ppid;
        e.processName = std::move(name);
        return e;
    };
    s.events = {ev("h1", 10, 1, "bash"), ev("h1", 11, 10, "ps"), ev("h2", 12, 10, "ls"),
                ev("h1", 10, 1, "sh"), ev("h1", 13, 10, "cat")};
    const auto out = enrich_parent_names(s, table);
    EXPECT_EQ(*out.events[0].parentProcessName, "unknown");
    EXPECT_EQ(*out.events[1].parentProcessName, "bash");
    EXPECT_EQ(*out.events[2].parentProcessName, "unknown") << "other host";
    EXPECT_EQ(*out.events[4].parentProcessName, "sh") << "most recent name wins";
    EXPECT_EQ(table.size(), 4u);

    // The table carries over into the next split.
    DatasetSplit t;
    t.events = {ev("h2", 20, 12, "x")};
    EXPECT_EQ(*enrich_parent_names(t, table).events[0].parentProcessName, "ls");
}

TEST(Enrich, NoLookahead) {
    DatasetSplit whole;
    whole.events = toy::synthetic_events(2000, 3, true);
    for (std::size_t i = 0; i < whole.events.size(); i += 3) {
        whole.events[i].parentProcessId = whole.events[(i * 7) % whole.events.size()].processId;
    }
    ProcessNameTable full_table;
    const auto full = enrich_parent_names(whole, full_table);
    for (std::size_t cut : {1u, 17u, 500u, 1999u}) {
        DatasetSplit prefix;
        prefix.events.assign(whole.events.begin(), whole.events.begin() + cut);
        ProcessNameTable table;
        const auto part = enrich_parent_names(prefix, table);
        for (std::size_t i = 0; i < cut; ++i) {
            ASSERT_EQ(*part.events[i].parentProcessName, *full.events[i].parentProcessName) << i;
        }
    }
}

TEST(Prepare, TinyFixtureVariants) {
    const auto [train, test] = load_beth(fs::path(STREAMAD_FIXTURES) / "beth_tiny");
    ASSERT_EQ(train.events.size(), 5u);
    ASSERT_EQ(test.events.size(), 5u);

    const auto plain = prepare_variant(train, test, false, false, default_schema(false));
    EXPECT_EQ(plain.n_rows, 10u);
    EXPECT_EQ(plain.n_train, 5u);
    EXPECT_EQ(plain.columns.size(), 8u);
    EXPECT_EQ(plain.text[0], "ps") << "unsorted keeps file order";

    const auto sorted = prepare_variant(train, test, true, false, default_schema(false));
    EXPECT_EQ(sorted.text[0], "systemd") << "ip-10-100-1-28 sorts first";
    EXPECT_EQ(sorted.text[2 * 2], "bash");
    // Test split order is untouched by sorting.
    EXPECT_EQ(std::vector<std::string>(sorted.text.begin() + 10, sorted.text.end()),
              std::vector<std::string>(plain.text.begin() + 10, plain.text.end()));

    const auto rich = prepare_variant(train, test, true, true, default_schema(true));
    // Column slots: processName, eventName, parentProcessName.
    auto parent = [&](std::size_t row) { return rich.text[row * 3 + 2]; };
    EXPECT_EQ(parent(0), "unknown");
    EXPECT_EQ(parent(3), "bash");      // ps (7301) under bash (7300)
    EXPECT_EQ(parent(5), "ps") << "test events see train processes";
    EXPECT_EQ(parent(6), "tsm");
}

TEST(Prepare, WriteReadRoundTripAndIdempotence) {
    const auto [train, test] = load_beth(fs::path(STREAMAD_FIXTURES) / "beth_tiny");
    const auto schema = default_schema(true);
    const auto data = prepare_variant(train, test, true, true, schema);
    const auto dir = temp_dir("prep");
    const auto paths = prepared_paths(dir, true, true, schema);
    write_prepared(data, paths);
    const auto first = slurp(paths.train) + slurp(paths.test);
    write_prepared(prepare_variant(train, test, true, true, schema), paths);
    EXPECT_EQ(first, slurp(paths.train) + slurp(paths.test));

    const auto back = read_prepared(paths);
    EXPECT_EQ(back.columns, data.columns);
    EXPECT_EQ(back.n_rows, data.n_rows);
    EXPECT_EQ(back.n_train, data.n_train);
    EXPECT_EQ(back.numeric, data.numeric);
    EXPECT_EQ(back.text, data.text);
    EXPECT_EQ(back.evil, data.evil);
    EXPECT_EQ(back.sus, data.sus);

    std::istringstream header(slurp(paths.train));
    std::string line;
    std::getline(header, line);
    EXPECT_EQ(std::count(line.begin(), line.end(), ','), static_cast<long>(schema.size() + 1));
    fs::remove_all(dir);
}

TEST(Prepare, StemDependsOnVariantAndSchema) {
    const auto a = prepared_stem(true, false, default_schema(false));
    EXPECT_NE(a, prepared_stem(false, false, default_schema(false)));
    EXPECT_NE(a, prepared_stem(true, true, default_schema(false)));
    EXPECT_NE(prepared_stem(true, true, default_schema(true)),
              prepared_stem(true, true, default_schema(false)));
    EXPECT_EQ(a.rfind("prepared_sorted1_enriched0_", 0), 0u);
}

TEST(Prepare, ReadRejectsBadFiles) {
    const auto dir = temp_dir("bad");
    PreparedPaths p{dir / "a.csv", dir / "b.csv"};
    { std::ofstream(p.train) << "eventId,evil,sus\n1,0,0\n"; }
    { std::ofstream(p.test) << "eventId,evil,sus\n1,0,2\n"; }
    EXPECT_THROW(read_prepared(p), MalformedRow);
    { std::ofstream(p.test) << "eventId,argsNum,evil,sus\n1,0,0,0\n"; }
    EXPECT_THROW(read_prepared(p), Error);
    { std::ofstream(p.test) << "eventId,label\n"; }
    EXPECT_THROW(read_prepared(p), MissingColumn);
    fs::remove_all(dir);
}
