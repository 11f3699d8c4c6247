// Regenerates everything under data/: stopword lists, the fact table, the
// five upstream dataset fixtures with their descriptors, the evaluation
// fixtures, and the desk-scale configs. Deterministic; run from the repo
// root. Fixture text is synthetic but every record is checked against the
// toy language detector so unification behaves predictably.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "halludet/corpus.hpp"
#include "halludet/errors.hpp"
#include "halludet/ingest.hpp"
#include "halludet/rng.hpp"
#include "halludet/synthetic.hpp"
#include "halludet/unify.hpp"
#include "json.hpp"

namespace {

using namespace halludet;
namespace fs = std::filesystem;
using json = nlohmann::json;

// ---------------------------------------------------------------------
// stopword lists (pairwise disjoint by construction; asserted below)
// ---------------------------------------------------------------------

const std::map<std::string, std::vector<std::string>> kStopwords = {
    {"en", {"the", "and", "is", "was", "of", "to", "in", "that", "it", "this", "with", "for",
            "are", "were", "has", "have", "not", "they", "its", "from"}},
    {"es", {"el", "los", "las", "una", "que", "por", "con", "para", "esta", "este", "pero",
            "como", "más", "muy", "fue", "son", "está", "también", "sus", "cada"}},
    {"fr", {"le", "les", "des", "une", "dans", "est", "sont", "avec", "pour", "qui", "ne",
            "pas", "cette", "aux", "été", "être", "aussi", "après", "ses", "leurs"}},
    {"it", {"il", "gli", "della", "delle", "dello", "degli", "nel", "nella", "che", "più",
            "anche", "sono", "era", "è", "questo", "ogni", "alcuni", "presso"}},
    {"hi", {"है", "का", "की", "के", "में", "और", "से", "पर", "यह", "को", "एक", "लिए", "गया",
            "थी", "था", "हैं"}},
    {"bn", {"এবং", "এই", "করে", "থেকে", "হয়", "একটি", "সালে", "ছিল", "জন্য", "তার", "হয়েছে"}},
    {"gu", {"છે", "અને", "માં", "થી", "પર", "એક", "હતું", "માટે", "આ", "તે", "હતી"}},
    {"ml", {"ആണ്", "എന്ന", "ഒരു", "ഇത്", "അത്", "വർഷം", "ഉണ്ട്", "എന്നും", "ചെയ്തു"}},
    {"te", {"మరియు", "ఒక", "లో", "ఇది", "అది", "ఉంది", "కోసం", "నుండి", "చేత"}},
};

void write_stopword_lists(const fs::path& dir) {
    // disjointness keeps the toy detector's posterior crisp
    std::map<std::string, std::string> owner;
    for (const auto& [lang, words] : kStopwords) {
        for (const std::string& w : words) {
            auto [it, inserted] = owner.emplace(w, lang);
            if (!inserted) {
                throw StageError("stopword '" + w + "' claimed by both " + it->second + " and " +
                                 lang);
            }
        }
    }
    fs::create_directories(dir);
    for (const auto& [lang, words] : kStopwords) {
        std::ofstream out(dir / (lang + ".txt"), std::ios::binary);
        for (const std::string& w : words) out << w << "\n";
    }
}

// ---------------------------------------------------------------------
// fact table
// ---------------------------------------------------------------------

struct FactSeed {
    const char* subject;
    const char* predicate;
    const char* object;
    ObjectKind kind;
    const char* domain;
};

std::vector<FactRecord> build_facts() {
    std::vector<FactSeed> seeds;

    const std::pair<const char*, int> elements[] = {
        {"Hydrogen", 1},   {"Helium", 2},    {"Lithium", 3},  {"Boron", 5},     {"Carbon", 6},
        {"Nitrogen", 7},   {"Oxygen", 8},    {"Fluorine", 9}, {"Neon", 10},     {"Sodium", 11},
        {"Magnesium", 12}, {"Aluminium", 13},{"Silicon", 14}, {"Phosphorus", 15},
        {"Sulfur", 16},    {"Chlorine", 17}, {"Argon", 18},   {"Potassium", 19},{"Calcium", 20},
        {"Titanium", 22},  {"Chromium", 24}, {"Iron", 26},    {"Cobalt", 27},   {"Nickel", 28},
        {"Copper", 29},    {"Zinc", 30},     {"Silver", 47},  {"Tin", 50},      {"Iodine", 53},
        {"Gold", 79},      {"Mercury", 80},  {"Lead", 82},    {"Uranium", 92}};
    static std::vector<std::string> element_objects;
    for (const auto& [name, z] : elements) {
        element_objects.push_back(std::to_string(z));
        seeds.push_back({name, "has atomic number", element_objects.back().c_str(),
                         ObjectKind::number, "science"});
    }

    const FactSeed science_dates[] = {
        {"Penicillin", "was discovered in", "1928", ObjectKind::date, "science"},
        {"The electron", "was identified in", "1897", ObjectKind::date, "science"},
        {"Radium", "was first isolated in", "1902", ObjectKind::date, "science"},
        {"The structure of DNA", "was described in", "1953", ObjectKind::date, "science"},
        {"The neutron", "was discovered in", "1932", ObjectKind::date, "science"},
        {"The first vaccine against smallpox", "was demonstrated in", "1796", ObjectKind::date, "science"},
        {"The periodic table", "was published in", "1869", ObjectKind::date, "science"},
        {"Insulin", "was first used clinically in", "1922", ObjectKind::date, "science"},
        {"The cosmic microwave background", "was detected in", "1964", ObjectKind::date, "science"},
        {"The first artificial satellite", "was launched in", "1957", ObjectKind::date, "science"},
        {"The double helix model", "was proposed in", "1953", ObjectKind::date, "science"},
        {"X-rays", "were first described in", "1895", ObjectKind::date, "science"},
    };
    for (const auto& s : science_dates) seeds.push_back(s);

    const FactSeed history_dates[] = {
        {"The Berlin Wall", "fell in", "1989", ObjectKind::date, "history"},
        {"The Titanic", "sank in", "1912", ObjectKind::date, "history"},
        {"The French Revolution", "began in", "1789", ObjectKind::date, "history"},
        {"The Magna Carta", "was sealed in", "1215", ObjectKind::date, "history"},
        {"The Great Fire of London", "occurred in", "1666", ObjectKind::date, "history"},
        {"The first modern Olympic Games", "were held in", "1896", ObjectKind::date, "history"},
        {"The United Nations", "was founded in", "1945", ObjectKind::date, "history"},
        {"The Suez Canal", "opened in", "1869", ObjectKind::date, "history"},
        {"The printing press of Gutenberg", "appeared around", "1440", ObjectKind::date, "history"},
        {"The Treaty of Westphalia", "was signed in", "1648", ObjectKind::date, "history"},
        {"The Panama Canal", "opened in", "1914", ObjectKind::date, "history"},
        {"The Wright brothers' first powered flight", "took place in", "1903", ObjectKind::date, "history"},
        {"The Transcontinental Railroad", "was completed in", "1869", ObjectKind::date, "history"},
        {"The Eiffel Tower", "was completed in", "1889", ObjectKind::date, "history"},
        {"The Brooklyn Bridge", "opened in", "1883", ObjectKind::date, "history"},
        {"The Golden Gate Bridge", "was finished in", "1937", ObjectKind::date, "history"},
        {"The Empire State Building", "was completed in", "1931", ObjectKind::date, "history"},
        {"The Sydney Opera House", "was inaugurated in", "1973", ObjectKind::date, "history"},
        {"The Channel Tunnel", "opened in", "1994", ObjectKind::date, "history"},
        {"The Hoover Dam", "was dedicated in", "1935", ObjectKind::date, "history"},
        {"The Statue of Liberty", "was dedicated in", "1886", ObjectKind::date, "history"},
        {"The Colosseum of Rome", "was completed around", "0080", ObjectKind::date, "history"},
        {"The first telegraph line between Washington and Baltimore", "opened in", "1844",
         ObjectKind::date, "history"},
        {"The Berlin Airlift", "began in", "1948", ObjectKind::date, "history"},
        {"The Apollo program's first crewed Moon landing", "happened in", "1969",
         ObjectKind::date, "history"},
        {"The Hundred Years' War", "ended in", "1453", ObjectKind::date, "history"},
        {"The Black Death", "reached Europe in", "1347", ObjectKind::date, "history"},
        {"The Spanish Armada", "was defeated in", "1588", ObjectKind::date, "history"},
        {"The first photograph", "was taken around", "1826", ObjectKind::date, "history"},
        {"The first public railway", "opened in", "1825", ObjectKind::date, "history"},
    };
    for (const auto& s : history_dates) seeds.push_back(s);

    const FactSeed capitals[] = {
        {"France", "has its capital at", "Paris", ObjectKind::location, "geography"},
        {"Spain", "has its capital at", "Madrid", ObjectKind::location, "geography"},
        {"Italy", "has its capital at", "Rome", ObjectKind::location, "geography"},
        {"Germany", "has its capital at", "Berlin", ObjectKind::location, "geography"},
        {"Portugal", "has its capital at", "Lisbon", ObjectKind::location, "geography"},
        {"Austria", "has its capital at", "Vienna", ObjectKind::location, "geography"},
        {"Greece", "has its capital at", "Athens", ObjectKind::location, "geography"},
        {"Norway", "has its capital at", "Oslo", ObjectKind::location, "geography"},
        {"Sweden", "has its capital at", "Stockholm", ObjectKind::location, "geography"},
        {"Finland", "has its capital at", "Helsinki", ObjectKind::location, "geography"},
        {"Poland", "has its capital at", "Warsaw", ObjectKind::location, "geography"},
        {"Hungary", "has its capital at", "Budapest", ObjectKind::location, "geography"},
        {"Japan", "has its capital at", "Tokyo", ObjectKind::location, "geography"},
        {"India", "has its capital at", "New Delhi", ObjectKind::location, "geography"},
        {"Egypt", "has its capital at", "Cairo", ObjectKind::location, "geography"},
        {"Kenya", "has its capital at", "Nairobi", ObjectKind::location, "geography"},
        {"Canada", "has its capital at", "Ottawa", ObjectKind::location, "geography"},
        {"Australia", "has its capital at", "Canberra", ObjectKind::location, "geography"},
        {"Brazil", "has its capital at", "Brasilia", ObjectKind::location, "geography"},
        {"Argentina", "has its capital at", "Buenos Aires", ObjectKind::location, "geography"},
        {"Peru", "has its capital at", "Lima", ObjectKind::location, "geography"},
        {"Chile", "has its capital at", "Santiago", ObjectKind::location, "geography"},
        {"Turkey", "has its capital at", "Ankara", ObjectKind::location, "geography"},
        {"Thailand", "has its capital at", "Bangkok", ObjectKind::location, "geography"},
        {"Vietnam", "has its capital at", "Hanoi", ObjectKind::location, "geography"},
        {"Indonesia", "has its capital at", "Jakarta", ObjectKind::location, "geography"},
        {"South Korea", "has its capital at", "Seoul", ObjectKind::location, "geography"},
        {"Morocco", "has its capital at", "Rabat", ObjectKind::location, "geography"},
        {"Ireland", "has its capital at", "Dublin", ObjectKind::location, "geography"},
        {"Scotland", "has its capital at", "Edinburgh", ObjectKind::location, "geography"},
        {"Netherlands", "has its capital at", "Amsterdam", ObjectKind::location, "geography"},
        {"Belgium", "has its capital at", "Brussels", ObjectKind::location, "geography"},
        {"Switzerland", "has its capital at", "Bern", ObjectKind::location, "geography"},
        {"Denmark", "has its capital at", "Copenhagen", ObjectKind::location, "geography"},
        {"Iceland", "has its capital at", "Reykjavik", ObjectKind::location, "geography"},
        {"Czechia", "has its capital at", "Prague", ObjectKind::location, "geography"},
        {"Russia", "has its capital at", "Moscow", ObjectKind::location, "geography"},
        {"China", "has its capital at", "Beijing", ObjectKind::location, "geography"},
        {"Mexico", "has its capital at", "Mexico City", ObjectKind::location, "geography"},
        {"Nigeria", "has its capital at", "Abuja", ObjectKind::location, "geography"},
    };
    for (const auto& s : capitals) seeds.push_back(s);

    const FactSeed art_names[] = {
        {"The Mona Lisa", "was painted by", "Leonardo da Vinci", ObjectKind::name, "arts"},
        {"The Starry Night", "was painted by", "Vincent van Gogh", ObjectKind::name, "arts"},
        {"Guernica", "was painted by", "Pablo Picasso", ObjectKind::name, "arts"},
        {"The Persistence of Memory", "was painted by", "Salvador Dali", ObjectKind::name, "arts"},
        {"The Ninth Symphony", "was composed by", "Ludwig van Beethoven", ObjectKind::name, "arts"},
        {"The Magic Flute", "was composed by", "Wolfgang Amadeus Mozart", ObjectKind::name, "arts"},
        {"The Four Seasons", "was composed by", "Antonio Vivaldi", ObjectKind::name, "arts"},
        {"Swan Lake", "was composed by", "Pyotr Tchaikovsky", ObjectKind::name, "arts"},
        {"The Girl with a Pearl Earring", "was painted by", "Johannes Vermeer", ObjectKind::name, "arts"},
        {"The Scream", "was painted by", "Edvard Munch", ObjectKind::name, "arts"},
        {"The Thinker", "was sculpted by", "Auguste Rodin", ObjectKind::name, "arts"},
        {"David", "was sculpted by", "Michelangelo", ObjectKind::name, "arts"},
        {"Water Lilies", "was painted by", "Claude Monet", ObjectKind::name, "arts"},
        {"American Gothic", "was painted by", "Grant Wood", ObjectKind::name, "arts"},
        {"The Rite of Spring", "was composed by", "Igor Stravinsky", ObjectKind::name, "arts"},
    };
    for (const auto& s : art_names) seeds.push_back(s);

    const FactSeed art_dates[] = {
        {"The premiere of The Rite of Spring", "took place in", "1913", ObjectKind::date, "arts"},
        {"The first public cinema screening of the Lumiere brothers", "happened in", "1895", ObjectKind::date, "arts"},
        {"The Louvre museum", "opened to the public in", "1793", ObjectKind::date, "arts"},
        {"The first photograph of a person", "was captured around", "1838", ObjectKind::date, "arts"},
        {"The Metropolitan Museum of Art", "was founded in", "1870", ObjectKind::date, "arts"},
        {"The first feature-length animated film", "premiered in", "1937", ObjectKind::date, "arts"},
        {"The Royal Albert Hall", "opened in", "1871", ObjectKind::date, "arts"},
    };
    for (const auto& s : art_dates) seeds.push_back(s);

    const FactSeed geo_numbers[] = {
        {"Mount Everest", "rises to a height in meters of", "8849", ObjectKind::number, "geography"},
        {"The Eiffel Tower", "measures in meters about", "330", ObjectKind::number, "geography"},
        {"The Nile", "stretches for a length in kilometers of about", "6650", ObjectKind::number, "geography"},
        {"The Amazon rainforest", "spans roughly this many countries:", "9", ObjectKind::number, "geography"},
        {"The Great Barrier Reef", "extends for about this many kilometers:", "2300", ObjectKind::number, "geography"},
        {"Lake Baikal", "reaches a depth in meters of about", "1642", ObjectKind::number, "geography"},
        {"The Sahara", "covers an area in million square kilometers of about", "9", ObjectKind::number, "geography"},
        {"The Mariana Trench", "descends to a depth in meters of about", "10935", ObjectKind::number, "geography"},
    };
    for (const auto& s : geo_numbers) seeds.push_back(s);

    const FactSeed tech_names[] = {
        {"The telephone", "was patented by", "Alexander Graham Bell", ObjectKind::name, "technology"},
        {"The World Wide Web", "was proposed by", "Tim Berners-Lee", ObjectKind::name, "technology"},
        {"The phonograph", "was invented by", "Thomas Edison", ObjectKind::name, "technology"},
        {"The first programmable mechanical computer", "was designed by", "Charles Babbage", ObjectKind::name, "technology"},
        {"The first compiler", "was developed by", "Grace Hopper", ObjectKind::name, "technology"},
        {"Wireless telegraphy", "was pioneered by", "Guglielmo Marconi", ObjectKind::name, "technology"},
        {"The polio vaccine", "was developed by", "Jonas Salk", ObjectKind::name, "technology"},
        {"Dynamite", "was invented by", "Alfred Nobel", ObjectKind::name, "technology"},
        {"The alternating current induction motor", "was developed by", "Nikola Tesla", ObjectKind::name, "technology"},
        {"The movable type printing press", "was introduced in Europe by", "Johannes Gutenberg", ObjectKind::name, "technology"},
        {"The diesel engine", "was invented by", "Rudolf Diesel", ObjectKind::name, "technology"},
        {"The jet engine", "was patented by", "Frank Whittle", ObjectKind::name, "technology"},
        {"The telescope improvements of the early modern era", "are associated with", "Galileo Galilei", ObjectKind::name, "technology"},
        {"The law of universal gravitation", "was formulated by", "Isaac Newton", ObjectKind::name, "technology"},
        {"The theory of general relativity", "was published by", "Albert Einstein", ObjectKind::name, "technology"},
        {"Radioactivity research in its pioneering era", "is associated with", "Marie Curie", ObjectKind::name, "technology"},
        {"The smallpox vaccination method", "was demonstrated by", "Edward Jenner", ObjectKind::name, "technology"},
        {"The three laws of planetary motion", "were stated by", "Johannes Kepler", ObjectKind::name, "technology"},
        {"The lightning rod", "was invented by", "Benjamin Franklin", ObjectKind::name, "technology"},
        {"Modern nursing practice", "was shaped by", "Florence Nightingale", ObjectKind::name, "technology"},
    };
    for (const auto& s : tech_names) seeds.push_back(s);

    const FactSeed book_names[] = {
        {"Pride and Prejudice", "was written by", "Jane Austen", ObjectKind::name, "literature"},
        {"Moby-Dick", "was written by", "Herman Melville", ObjectKind::name, "literature"},
        {"War and Peace", "was written by", "Leo Tolstoy", ObjectKind::name, "literature"},
        {"Don Quixote", "was written by", "Miguel de Cervantes", ObjectKind::name, "literature"},
        {"The Odyssey", "is attributed to", "Homer", ObjectKind::name, "literature"},
        {"Hamlet", "was written by", "William Shakespeare", ObjectKind::name, "literature"},
        {"One Hundred Years of Solitude", "was written by", "Gabriel Garcia Marquez", ObjectKind::name, "literature"},
        {"Crime and Punishment", "was written by", "Fyodor Dostoevsky", ObjectKind::name, "literature"},
        {"Les Miserables", "was written by", "Victor Hugo", ObjectKind::name, "literature"},
        {"The Divine Comedy", "was written by", "Dante Alighieri", ObjectKind::name, "literature"},
        {"Faust", "was written by", "Johann Wolfgang von Goethe", ObjectKind::name, "literature"},
        {"Great Expectations", "was written by", "Charles Dickens", ObjectKind::name, "literature"},
        {"Mrs Dalloway", "was written by", "Virginia Woolf", ObjectKind::name, "literature"},
        {"The Old Man and the Sea", "was written by", "Ernest Hemingway", ObjectKind::name, "literature"},
        {"Things Fall Apart", "was written by", "Chinua Achebe", ObjectKind::name, "literature"},
        {"The Tale of Genji", "is attributed to", "Murasaki Shikibu", ObjectKind::name, "literature"},
        {"Frankenstein", "was written by", "Mary Shelley", ObjectKind::name, "literature"},
        {"The Metamorphosis", "was written by", "Franz Kafka", ObjectKind::name, "literature"},
        {"Madame Bovary", "was written by", "Gustave Flaubert", ObjectKind::name, "literature"},
        {"Anna Karenina", "was written by", "Leo Tolstoy", ObjectKind::name, "literature"},
    };
    for (const auto& s : book_names) seeds.push_back(s);

    const FactSeed claims[] = {
        {"Water at sea level", "boils at", "100 degrees Celsius", ObjectKind::claim, "science"},
        {"Light in a vacuum", "travels at about", "299792 kilometers per second", ObjectKind::claim, "science"},
        {"The human heart", "normally has", "four chambers", ObjectKind::claim, "science"},
        {"The adult human skeleton", "typically contains", "206 bones", ObjectKind::claim, "science"},
        {"Sound in dry air at room temperature", "travels at about", "343 meters per second", ObjectKind::claim, "science"},
        {"A day on Earth", "lasts about", "24 hours", ObjectKind::claim, "science"},
        {"DNA", "is composed of", "four nucleotide bases", ObjectKind::claim, "science"},
        {"The Moon", "takes about", "27 days to orbit Earth", ObjectKind::claim, "science"},
        {"Photosynthesis", "converts carbon dioxide and water into", "glucose and oxygen", ObjectKind::claim, "science"},
        {"Table salt", "is chemically", "sodium chloride", ObjectKind::claim, "science"},
        {"The speed of Earth's rotation at the equator", "is roughly", "1670 kilometers per hour", ObjectKind::claim, "science"},
        {"Absolute zero", "corresponds to", "minus 273 degrees Celsius", ObjectKind::claim, "science"},
        {"Honey", "is produced by", "bees from flower nectar", ObjectKind::claim, "science"},
        {"The Pacific", "is", "the largest ocean on Earth", ObjectKind::claim, "geography"},
        {"The blue whale", "is", "the largest animal known to have existed", ObjectKind::claim, "science"},
    };
    for (const auto& s : claims) seeds.push_back(s);

    std::vector<FactRecord> facts;
    facts.reserve(seeds.size());
    for (const FactSeed& s : seeds) {
        FactRecord f;
        f.subject = s.subject;
        f.predicate = s.predicate;
        f.object = s.object;
        f.object_kind = s.kind;
        f.domain = s.domain;
        f.validate();
        facts.push_back(std::move(f));
    }
    return facts;
}

// ---------------------------------------------------------------------
// multilingual sentence banks for the upstream fixtures
// ---------------------------------------------------------------------

struct SentenceBank {
    std::vector<std::string> templates;  // with {city} {num} {year} slots
    std::vector<std::string> cities;
};

std::string fill(std::string t, const std::string& city, long num, long year) {
    auto replace_all = [&](const std::string& slot, const std::string& value) {
        size_t pos;
        while ((pos = t.find(slot)) != std::string::npos) t.replace(pos, slot.size(), value);
    };
    replace_all("{city}", city);
    replace_all("{num}", std::to_string(num));
    replace_all("{year}", std::to_string(year));
    return t;
}

const std::map<std::string, SentenceBank>& banks() {
    static const std::map<std::string, SentenceBank> kBanks = {
        {"en",
         {{
              "The old library in {city} was renovated in {year} and it now holds {num} reading rooms.",
              "The museum of {city} opened to visitors in {year} with {num} exhibition halls.",
              "This bridge connects the harbor district of {city} and it was finished in {year}.",
              "The research station near {city} has collected weather records for {num} years.",
              "The clock tower of {city} was built in {year} and it still chimes {num} times a day.",
              "The botanical garden in {city} is home to {num} species that were catalogued in {year}.",
              "The city council of {city} has archived {num} maps that were drawn before {year}.",
              "The observatory near {city} was founded in {year} and it hosts {num} telescopes.",
          },
          {"Ashford", "Brimley", "Caldwell", "Dunmore", "Eastvale", "Fernwick", "Glenport",
           "Harrowgate", "Inverlea", "Jarrow", "Kestrel Bay", "Larkfield", "Mossbridge",
           "Northcote", "Oakhaven", "Pellworth", "Quarry Hill", "Redmoor", "Silverton",
           "Thornbury", "Umberland", "Vantage Point", "Westmere", "Yarrowdale"}}},
        {"es",
         {{
              "El museo regional de {city} fue inaugurado hace {num} años y también conserva {num} manuscritos.",
              "Los astrónomos de {city} observaron el cometa por {num} noches seguidas en {year}.",
              "Las bibliotecas públicas de {city} reúnen más de {num} volúmenes históricos.",
              "Este laboratorio está cerca de {city} y publica {num} informes muy detallados cada año.",
              "Una orquesta que visitó {city} ofreció {num} conciertos para celebrar su aniversario.",
              "El puente viejo de {city} fue restaurado en {year} con {num} arcos nuevos.",
              "Los talleres de cerámica de {city} producen {num} piezas que son muy apreciadas.",
          },
          {"Almadera", "Bellavista", "Cormoran", "Duranza", "Esperilla", "Fontclara", "Granvado",
           "Hornachos", "Islaverde", "Jacaranda", "Lumbrales", "Miravalle", "Navalmor",
           "Olivenza", "Pedregal", "Quintanar", "Riofrio", "Solandra", "Torremar", "Valdemora"}}},
        {"fr",
         {{
              "Le jardin botanique de {city} est connu pour ses {num} variétés rares.",
              "Les archives de {city} contiennent des documents qui datent de {year}.",
              "Une exposition dans la galerie de {city} a attiré {num} visiteurs après le premier mois.",
              "Cette usine près de {city} fabrique des turbines avec {num} employés.",
              "Le théâtre municipal de {city} est aussi célèbre pour ses {num} colonnes.",
              "Les ponts de {city} ont été rénovés en {year} pour {num} millions.",
              "Une troupe qui répète dans {city} prépare {num} spectacles pour la saison.",
          },
          {"Argelune", "Beaumorel", "Clairfont", "Doriange", "Escaudin", "Fleurmont", "Gravelin",
           "Hautcourt", "Islemer", "Jonquiere", "Lormeau", "Montclair", "Noirvaux", "Orvilliers",
           "Pontarlet", "Quercyval", "Rosemare", "Saintomer", "Tourvelle", "Vaudreuil"}}},
        {"it",
         {{
              "Il mercato centrale nella zona vecchia di {city} è attivo da {num} generazioni.",
              "Gli artigiani della regione di {city} producono anche {num} strumenti ogni anno.",
              "Il ponte che attraversa il fiume presso {city} fu ricostruito nel {year}.",
              "Nella città di {city} sono rimaste più di {num} torri medievali.",
              "Questo archivio nel centro di {city} conserva più di {num} pergamene che risalgono al {year}.",
              "Il festival della musica di {city} è organizzato ogni {num} anni.",
              "Gli scavi presso {city} hanno riportato alla luce più di {num} mosaici nel {year}.",
          },
          {"Albarosa", "Borgoverde", "Castellino", "Dolcedo", "Erbavella", "Fiorvento",
           "Grancastello", "Lardizzone", "Montebrano", "Novellara", "Orsomarso", "Pietraviva",
           "Quartesana", "Roccalba", "Santerno", "Torricella", "Uliveto", "Valdinoce",
           "Zagarella"}}},
        {"hi",
         {{
              "{city} का पुराना पुस्तकालय {num} साल पहले बनाया गया था।",
              "{city} में हर साल {num} से अधिक मेले लगते हैं और लोग दूर से आते हैं।",
              "यह संग्रहालय {city} के पास है और इसमें {num} चित्र रखे गए हैं।",
              "{city} की नदी पर एक लंबा पुल {year} में बनाया गया था।",
              "विज्ञान मेले के लिए {city} से {num} छात्र आए थे।",
              "{city} के किले में {num} पुराने नक्शे सुरक्षित हैं।",
              "{city} का रेलवे स्टेशन {year} में खोला गया था और यह अब भी चालू है।",
          },
          {"रामपुर", "सूरजगढ़", "चंदनपुर", "नीलगांव", "हरिपुर", "मेघनगर", "कमलपुर", "शांतिपुर",
           "विजयनगर", "गोकुलपुर", "अमरकोट", "सुंदरवाड़ा", "केसરगंज", "मोहनगढ़", "तारापुर",
           "भीमपुर"}}},
    };
    return kBanks;
}

// Second bank with distinct phrasing so fact-checking rows never collide
// with the other fixtures.
const std::vector<std::string>& factcheck_templates() {
    static const std::vector<std::string> kTemplates = {
        "Reviewers examined the claim that %s %p %o and they compared it with the published sources.",
        "According to the submitted article, %s %p %o, and this statement was sent for verification.",
        "The panel assessed whether it is true that %s %p %o.",
        "A reader asked the desk to confirm that %s %p %o.",
    };
    return kTemplates;
}

std::string render_fact(const std::string& tmpl, const std::string& subject,
                        const std::string& predicate, const std::string& object) {
    std::string out = tmpl;
    auto sub = [&](const std::string& slot, const std::string& value) {
        const size_t pos = out.find(slot);
        if (pos != std::string::npos) out.replace(pos, slot.size(), value);
    };
    sub("%s", subject);
    sub("%p", predicate);
    sub("%o", object);
    return out;
}

// ---------------------------------------------------------------------
// fixture emission helpers
// ---------------------------------------------------------------------

struct UniquePool {
    std::set<std::string> seen;

    bool claim(const std::string& text) { return seen.insert(normalize_text(text)).second; }
};

struct TextMaker {
    const StopwordDetector& detector;
    UniquePool& pool;
    Rng rng;

    TextMaker(const StopwordDetector& det, UniquePool& p, uint64_t seed)
        : detector(det), pool(p), rng(seed) {}

    // Draws sentences until one is globally unique and detector-confirmed.
    std::string sentence(const std::string& lang) {
        const SentenceBank& bank = banks().at(lang);
        for (int attempt = 0; attempt < 4096; ++attempt) {
            const std::string& tmpl = bank.templates[rng.below(bank.templates.size())];
            const std::string& city = bank.cities[rng.below(bank.cities.size())];
            const long num = 3 + static_cast<long>(rng.below(95));
            const long year = 1820 + static_cast<long>(rng.below(180));
            std::string text = fill(tmpl, city, num, year);
            if (!pool.claim(text)) continue;
            const LangVerdict v = detector.detect(text);
            if (v.lang != lang || v.confidence < 0.9) {
                throw StageError("fixture sentence for " + lang + " detected as " + v.lang +
                                 ": " + text);
            }
            return text;
        }
        throw StageError("sentence bank exhausted for " + lang);
    }
};

void write_lines(const fs::path& path, const std::vector<std::string>& lines) {
    fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write fixture: " + path.string());
    for (const std::string& line : lines) out << line << "\n";
}

// SHROOM-style files: two schema variants of the same source. The combined
// 724 records split 536/188, i.e. the 74/26 imbalance that motivates
// balancing.
void write_shroom_fixture(const fs::path& dir, TextMaker& maker, int variant) {
    const int total = 362;
    const int n_correct = 268;
    const std::vector<std::pair<std::string, int>> lang_plan = {
        {"en", 90}, {"es", 68}, {"fr", 68}, {"hi", 68}, {"it", 68}};

    struct Row {
        std::string text;
        std::string lang;
        bool hallucinated = false;
        std::string axis;
    };
    std::vector<Row> rows;
    rows.reserve(total);
    for (const auto& [lang, count] : lang_plan) {
        for (int i = 0; i < count; ++i) {
            Row r;
            r.text = maker.sentence(lang);
            r.lang = lang;
            r.axis = maker.rng.below(2) == 0 ? "factuality" : "fluency";
            rows.push_back(std::move(r));
        }
    }
    // deterministic label assignment: shuffle indices, first 94 hallucinated
    std::vector<size_t> order(rows.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    Rng label_rng(derive_seed(maker.rng.next(), 17));
    label_rng.shuffle(order);
    for (size_t k = 0; k < static_cast<size_t>(total - n_correct); ++k) {
        rows[order[k]].hallucinated = true;
    }
    // decorate a few texts with raw whitespace and decomposed accents to
    // exercise normalization downstream
    if (!rows.empty()) {
        rows[0].text = "  " + rows[0].text + " ";
        for (Row& r : rows) {
            if (r.lang == "fr" && r.text.find("célèbre") != std::string::npos) {
                // é -> e + combining acute (NFD form)
                const std::string nfc = "célèbre";
                const std::string nfd = "célèbre";
                r.text.replace(r.text.find(nfc), nfc.size(), nfd);
                break;
            }
        }
    }

    std::vector<std::string> lines;
    lines.reserve(rows.size());
    for (size_t i = 0; i < rows.size(); ++i) {
        const Row& r = rows[i];
        json j;
        if (variant == 1) {
            j["model_output_text"] = r.text;
            j["label"] = r.hallucinated ? "Hallucination" : "Not Hallucination";
            j["lang"] = r.lang;
            j["axis"] = r.axis;
        } else {
            j["uid"] = "shroom2-" + std::to_string(i);
            j["text"] = r.text;
            j["annotation"] = r.hallucinated ? "Hallucination" : "Not Hallucination";
            j["language"] = r.lang;
            j["axis"] = r.axis;
        }
        lines.push_back(j.dump());
    }
    write_lines(dir / ("shroom_v" + std::to_string(variant) + ".jsonl"), lines);
}

void write_synthetic_fixture(const fs::path& dir, const std::vector<FactRecord>& facts,
                             TextMaker& maker) {
    GenerationSpec spec;
    spec.n_pairs = 190;
    spec.seed = 20250901;
    std::vector<Sample> generated = generate_corpus(spec, facts);

    std::vector<std::string> lines;
    for (const Sample& s : generated) {
        json j;
        j["text"] = s.text;
        j["label"] = s.label == Label::hallucinated ? 1 : 0;
        j["lang"] = s.lang;
        lines.push_back(j.dump());
        // pairs can legitimately repeat a correct statement; downstream
        // dedup is the stage that collapses them
        maker.pool.claim(s.text);
    }
    // a few non-English rows so the source reads as multilingual
    const std::vector<std::string> langs = {"es", "fr", "hi", "it"};
    for (int i = 0; i < 20; ++i) {
        json j;
        j["text"] = maker.sentence(langs[static_cast<size_t>(i) % langs.size()]);
        j["label"] = i % 2;
        j["lang"] = langs[static_cast<size_t>(i) % langs.size()];
        lines.push_back(j.dump());
    }
    write_lines(dir / "synthetic_100k.jsonl", lines);
}

std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += "\"\"";
        else out.push_back(c);
    }
    out += "\"";
    return out;
}

void write_libreeval_fixture(const fs::path& dir, TextMaker& maker) {
    std::vector<std::string> lines;
    lines.push_back("id,text,label,language");
    int serial = 0;
    auto push = [&](const std::string& text, const std::string& label, const std::string& lang) {
        lines.push_back("libre-" + std::to_string(serial++) + "," + csv_escape(text) + "," +
                        label + "," + lang);
    };
    // 297 regular rows: 157 faithful / 140 hallucinated across en, es, fr
    const std::vector<std::string> langs = {"en", "es", "fr"};
    for (int i = 0; i < 297; ++i) {
        const std::string lang = langs[static_cast<size_t>(i) % langs.size()];
        std::string text = maker.sentence(lang);
        if (i % 13 == 0) text += ", reviewers noted, with minor caveats";  // embedded commas
        push(text, i % 100 < 53 ? "faithful" : "hallucinated", lang);
    }
    // 3 rows with a wrong declared language (Spanish text declared "en");
    // unification quarantines these
    for (int i = 0; i < 3; ++i) push(maker.sentence("es"), "faithful", "en");
    // 20 unlabeled-ish rows mapped to drop
    for (int i = 0; i < 20; ++i) push(maker.sentence("en"), "unsure", "en");
    write_lines(dir / "libreeval.csv", lines);
}

void write_factchd_fixture(const fs::path& dir, const std::vector<FactRecord>& facts,
                           UniquePool& pool) {
    std::vector<std::string> lines;
    lines.push_back("claim_id\tclaim\tverdict");
    Rng rng(77001);
    const auto& templates = factcheck_templates();
    int serial = 0;
    int emitted = 0;
    size_t fact_idx = 0;
    while (emitted < 250) {
        const FactRecord& f = facts[fact_idx % facts.size()];
        ++fact_idx;
        const bool factual = emitted % 100 < 56;  // 140/110 split
        std::string object = f.object;
        if (!factual) {
            // simple distortion for the fixture: years drift, otherwise tag on
            // a wrong qualifier
            if (f.object_kind == ObjectKind::date || f.object_kind == ObjectKind::number) {
                object = std::to_string(std::stol(f.object) + 11 + static_cast<long>(rng.below(30)));
            } else {
                object = f.object + " of the northern province";
            }
        }
        const std::string text =
            render_fact(templates[rng.below(templates.size())], f.subject, f.predicate, object);
        if (!pool.claim(text)) continue;
        lines.push_back("factchd-" + std::to_string(serial++) + "\t" + text + "\t" +
                        (factual ? "FACTUAL" : "NON-FACTUAL"));
        ++emitted;
    }
    write_lines(dir / "factchd.tsv", lines);
}

void write_descriptors(const fs::path& dir) {
    fs::create_directories(dir);
    auto save = [&](const char* file, SourceDescriptor d) {
        save_descriptor(d, dir / file);
    };
    {
        SourceDescriptor d;
        d.name = Source::shroom_v1v2;
        d.input_format = InputFormat::jsonl;
        d.text_field = "model_output_text";
        d.label_field = "label";
        d.lang_field = "lang";
        d.axis_field = "axis";
        d.domain = "Scientific";
        d.label_map = {{"Hallucination", LabelTarget::hallucinated},
                       {"Not Hallucination", LabelTarget::correct}};
        save("shroom_v1.json", d);
    }
    {
        SourceDescriptor d;
        d.name = Source::shroom_v1v2;
        d.input_format = InputFormat::jsonl;
        d.text_field = "text";
        d.label_field = "annotation";
        d.lang_field = "language";
        d.id_field = "uid";
        d.axis_field = "axis";
        d.domain = "Scientific";
        d.label_map = {{"Hallucination", LabelTarget::hallucinated},
                       {"Not Hallucination", LabelTarget::correct}};
        save("shroom_v2.json", d);
    }
    {
        SourceDescriptor d;
        d.name = Source::synthetic_100k;
        d.input_format = InputFormat::jsonl;
        d.text_field = "text";
        d.label_field = "label";
        d.lang_field = "lang";
        d.domain = "General";
        d.label_map = {{"0", LabelTarget::correct}, {"1", LabelTarget::hallucinated}};
        save("synthetic_100k.json", d);
    }
    {
        SourceDescriptor d;
        d.name = Source::libreeval;
        d.input_format = InputFormat::csv;
        d.text_field = "text";
        d.label_field = "label";
        d.lang_field = "language";
        d.id_field = "id";
        d.domain = "Mixed";
        d.label_map = {{"faithful", LabelTarget::correct},
                       {"hallucinated", LabelTarget::hallucinated},
                       {"unsure", LabelTarget::drop}};
        save("libreeval.json", d);
    }
    {
        SourceDescriptor d;
        d.name = Source::factchd;
        d.input_format = InputFormat::tsv;
        d.text_field = "claim";
        d.label_field = "verdict";
        d.default_lang = "en";
        d.id_field = "claim_id";
        d.domain = "Fact-checking";
        d.label_map = {{"FACTUAL", LabelTarget::correct},
                       {"NON-FACTUAL", LabelTarget::hallucinated}};
        save("factchd.json", d);
    }
}

// ---------------------------------------------------------------------
// evaluation fixtures realizing the published per-language F1 table
// ---------------------------------------------------------------------

struct AxisCells {
    int tp, fp, fn;  // tn fixed below
};
struct LangCells {
    const char* lang;
    AxisCells factuality;
    AxisCells fluency;
};

// Confusion cells solved so that F1 = 2tp/(2tp+fp+fn) lands within 5e-4 of
// the published value for every language and axis.
const LangCells kResultsCells[] = {
    {"gu", {12, 11, 12}, {3, 16, 16}},    // 0.5107 / 0.1579
    {"bn", {59, 73, 74}, {7, 20, 21}},    // 0.4449 / 0.2542
    {"hi", {13, 13, 14}, {22, 28, 29}},   // 0.4906 / 0.4353
    {"es", {19, 19, 20}, {29, 34, 34}},   // 0.4938 / 0.4607
    {"fr", {21, 23, 23}, {10, 24, 25}},   // 0.4771 / 0.2899
    {"te", {9, 10, 10}, {5, 29, 29}},     // 0.4738 / 0.1474
    {"ml", {4, 4, 5}, {7, 12, 13}},       // 0.4704 / 0.3593
    {"en", {7, 9, 10}, {20, 24, 25}},     // 0.4246 / 0.4495
    {"it", {14, 30, 31}, {11, 13, 13}},   // 0.3149 / 0.4582
};

void write_eval_fixture(const fs::path& dir) {
    fs::create_directories(dir);
    std::ofstream gold(dir / "gold.jsonl", std::ios::binary);
    std::ofstream preds(dir / "predictions.jsonl", std::ios::binary);
    if (!gold || !preds) throw DataError("cannot write eval fixtures");
    Rng rng(424242);
    const int tn = 20;
    for (const LangCells& lc : kResultsCells) {
        for (int axis = 0; axis < 2; ++axis) {
            const AxisCells& cells = axis == 0 ? lc.factuality : lc.fluency;
            const std::string axis_name = axis == 0 ? "factuality" : "fluency";
            int serial = 0;
            auto emit = [&](int count, const char* gold_label, const char* pred_label) {
                for (int i = 0; i < count; ++i) {
                    const std::string id = std::string("eval:") + lc.lang + ":" + axis_name + ":" +
                                           std::to_string(serial++);
                    json g;
                    g["id"] = id;
                    g["axis"] = axis_name;
                    g["label"] = gold_label;
                    g["lang"] = lc.lang;
                    gold << g.dump() << "\n";
                    json p;
                    p["id"] = id;
                    p["axis"] = axis_name;
                    p["label"] = pred_label;
                    p["confidence"] = 0.55 + 0.01 * static_cast<double>(rng.below(45));
                    preds << p.dump() << "\n";
                }
            };
            emit(cells.tp, "hallucinated", "hallucinated");
            emit(cells.fp, "correct", "hallucinated");
            emit(cells.fn, "hallucinated", "correct");
            emit(tn, "correct", "correct");
        }
    }
    std::ofstream ranks(dir / "ranks.json", std::ios::binary);
    ranks << json{{"gu", 2}, {"bn", 4}, {"hi", 4}, {"es", 5}, {"fr", 5},
                  {"te", 5}, {"ml", 5}, {"en", 6}, {"it", 5}}
                 .dump(2)
          << "\n";
}

void write_configs(const fs::path& dir) {
    fs::create_directories(dir);
    {
        std::ofstream out(dir / "train_desk.cfg", std::ios::binary);
        out << "epochs=2\n"
               "batch_size=16\n"
               "learning_rate=0.002\n"
               "weight_decay=0.01\n"
               "warmup_fraction=0.10\n"
               "class_weight_correct=1.5\n"
               "class_weight_hallucinated=1.0\n"
               "checkpoint_interval=5000\n"
               "seed=7\n"
               "clip_norm=1.0\n"
               "schedule=linear_decay\n"
               "dropout_rate=0.1\n";
    }
    {
        std::ofstream out(dir / "train_paper.cfg", std::ios::binary);
        out << "epochs=3\n"
               "batch_size=32\n"
               "learning_rate=2e-05\n"
               "weight_decay=0.01\n"
               "warmup_fraction=0.10\n"
               "class_weight_correct=1.5\n"
               "class_weight_hallucinated=1.0\n"
               "checkpoint_interval=5000\n"
               "seed=42\n"
               "clip_norm=1.0\n"
               "schedule=linear_decay\n"
               "dropout_rate=0.1\n";
    }
    {
        std::ofstream out(dir / "encoder_desk.json", std::ios::binary);
        out << json{{"name", "tiny"},      {"n_layers", 2},      {"n_heads", 2},
                    {"hidden_dim", 48},    {"max_seq_len", 64},  {"vocab_size", 4096}}
                   .dump(2)
            << "\n";
    }
}

}  // namespace

int main(int argc, char** argv) {
    const fs::path out_root = argc > 1 ? argv[1] : "data";
    try {
        write_stopword_lists(out_root / "stopwords");
        const StopwordDetector detector =
            StopwordDetector::from_directory(out_root / "stopwords");

        const std::vector<FactRecord> facts = build_facts();
        fs::create_directories(out_root / "facts");
        save_facts(facts, out_root / "facts" / "facts.jsonl");
        std::cout << "fact table: " << facts.size() << " facts\n";

        UniquePool pool;
        TextMaker maker(detector, pool, 90210);
        const fs::path fixtures = out_root / "fixtures";
        write_shroom_fixture(fixtures, maker, 1);
        write_shroom_fixture(fixtures, maker, 2);
        write_synthetic_fixture(fixtures, facts, maker);
        write_libreeval_fixture(fixtures, maker);
        write_factchd_fixture(fixtures, facts, pool);
        write_descriptors(out_root / "descriptors");
        write_eval_fixture(fixtures / "eval");
        write_configs(out_root / "configs");

        // sanity pass: every descriptor ingests its fixture without errors
        const std::vector<std::pair<std::string, std::string>> plan = {
            {"shroom_v1.json", "shroom_v1.jsonl"},
            {"shroom_v2.json", "shroom_v2.jsonl"},
            {"synthetic_100k.json", "synthetic_100k.jsonl"},
            {"libreeval.json", "libreeval.csv"},
            {"factchd.json", "factchd.tsv"},
        };
        for (const auto& [desc_file, fixture_file] : plan) {
            const SourceDescriptor d = load_descriptor(out_root / "descriptors" / desc_file);
            auto [samples, summary] = ingest_source_to_vector(d, fixtures / fixture_file);
            std::cout << fixture_file << ": emitted=" << summary.emitted
                      << " dropped=" << summary.dropped << "\n";
        }
        std::cout << "fixtures written under " << out_root.string() << "\n";
    } catch (const std::exception& e) {
        std::cerr << "fixture generation failed: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
