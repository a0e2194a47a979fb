#!/usr/bin/env python3
"""Regenerates the deterministic fixture corpus under fixtures/.

Emits, for every series in the built-in table:
  descriptions/<code>.txt           series description documents
  responses/<code>_<key>.json       scripted backend responses (4 per series)
  roster.csv, families.csv, config.json
plus the two knowledge-base document trees. After writing everything the
script recomputes the aggregate statistics the test suite asserts (dimension
ordering per KSA category, family ordering, ranking pins) and fails loudly if
the table ever drifts out of shape.

Usage: python3 tools/gen_fixtures.py
"""

from __future__ import annotations

import json
import pathlib
import sys

ROOT = pathlib.Path(__file__).resolve().parent.parent / "fixtures"

DIMENSIONS = ("complementarity", "augmentation", "substitutivity")
KSA_KEYS = ("k1", "k2", "k3", "s1", "s2", "s3", "a1", "a2", "a3")


def U(x):  # uniform nine-score vector
    return [x] * 9


# Each series: title, family, nine competencies (name, gloss), and one
# nine-score vector per dimension (order k1..k3, s1..s3, a1..a3).
SERIES = [
    {
        "code": "0110",
        "title": "Economist",
        "family": "white_collar",
        "ksas": [
            ("Economic Principles", "microeconomic and macroeconomic theory applied to markets, incentives, and policy trade-offs"),
            ("Economic Institutions", "the structure and behavior of banks, regulators, labor bodies, and international organizations"),
            ("Statistical Theory", "sampling, estimation, and hypothesis testing foundations behind empirical work"),
            ("Data Analysis", "preparing, transforming, and interrogating large economic datasets"),
            ("Econometric Modeling", "specifying and estimating regression and time-series models"),
            ("Technical Writing", "drafting clear analytical reports and policy memoranda"),
            ("Interpreting Economic Indicators", "drawing sound conclusions from mixed and noisy signals"),
            ("Advising on Policy Options", "weighing distributional and fiscal consequences for decision makers"),
            ("Communicating Analytical Findings", "presenting quantitative results to non-technical audiences"),
        ],
        "scores": {
            "complementarity": [4, 3, 5, 5, 4, 4, 4, 3, 3],
            "augmentation": [3, 2, 4, 4, 4, 3, 3, 2, 2],
            "substitutivity": [2, 2, 3, 4, 3, 3, 2, 1, 1],
        },
    },
    {
        "code": "0084",
        "title": "Nuclear Materials Courier",
        "family": "white_collar",
        "ksas": [
            ("Security Protocols", "safeguards, custody chains, and access control for sensitive shipments"),
            ("Federal Transport Regulations", "rules governing movement of high-consequence materials"),
            ("Threat Assessment Doctrine", "recognizing and classifying hostile surveillance and attack indicators"),
            ("Defensive Driving", "evasive and protective vehicle operation in convoy"),
            ("Firearms Proficiency", "safe, accurate weapons handling under qualification standards"),
            ("Convoy Communications", "disciplined radio procedure across escort teams"),
            ("Sustained Vigilance", "maintaining alertness across long escort missions"),
            ("Rapid Threat Response", "acting decisively within seconds of an incident"),
            ("Operating Under Stress", "performing controlled procedures during emergencies"),
        ],
        "scores": {
            "complementarity": U(2),
            "augmentation": U(2),
            "substitutivity": U(1),
        },
    },
    {
        "code": "0485",
        "title": "Wildlife Refuge Management",
        "family": "white_collar",
        "ksas": [
            ("Wildlife Biology", "life histories, population dynamics, and habitat needs of managed species"),
            ("Habitat Management Practices", "water, vegetation, and fire treatments that sustain refuge habitat"),
            ("Conservation Law", "statutes and regulations governing refuges, take, and land use"),
            ("Species Population Monitoring", "designing and running field surveys and counts"),
            ("Geographic Data Mapping", "maintaining spatial layers for habitat and infrastructure"),
            ("Grant and Report Writing", "preparing funding proposals and mandated conservation reports"),
            ("Field Observation", "detecting ecological change directly on the ground"),
            ("Coordinating Volunteers and Partners", "organizing seasonal crews, friends groups, and agencies"),
            ("Adaptive Resource Planning", "revising management actions as conditions shift"),
        ],
        "scores": {
            "complementarity": U(4),
            "augmentation": U(4),
            "substitutivity": U(2),
        },
    },
    {
        "code": "0530",
        "title": "Cash Processing",
        "family": "white_collar",
        "ksas": [
            ("Cash Handling Procedures", "counting, strapping, and custody rules for currency operations"),
            ("Banking Regulations", "deposit, reporting, and audit requirements for cash operations"),
            ("Reconciliation Standards", "balancing totals across tills, vaults, and ledgers"),
            ("High-Volume Transaction Processing", "keying and verifying long runs of routine transactions"),
            ("Currency Verification", "screening notes for fitness and authenticity"),
            ("Ledger Data Entry", "posting amounts accurately into accounting systems"),
            ("Sustained Accuracy Under Repetition", "holding error rates near zero through repetitive work"),
            ("Detecting Discrepancies", "spotting shortages, overages, and anomalies quickly"),
            ("Meeting Processing Deadlines", "clearing daily volume inside fixed cutoff times"),
        ],
        "scores": {
            "complementarity": U(3),
            "augmentation": U(3),
            "substitutivity": [5, 4, 4, 5, 4, 4, 4, 4, 5],
        },
    },
    {
        "code": "0356",
        "title": "Data Transcriber",
        "family": "white_collar",
        "ksas": [
            ("Data Entry Conventions", "standard codes, field formats, and batching rules for records"),
            ("Records Management Rules", "retention, privacy, and filing requirements for source documents"),
            ("Document Formats", "layouts of the forms and source papers being transcribed"),
            ("Touch Typing and Keying", "fast, accurate keyboard transcription from source material"),
            ("Proofreading Transcribed Records", "comparing keyed output against originals"),
            ("Batch Processing", "moving work through queues under production counts"),
            ("Sustained Attention to Detail", "catching single-character errors across thousands of fields"),
            ("Working to Production Standards", "meeting documented speed and accuracy targets"),
            ("Handling Repetitive Tasks", "staying reliable across uniform daily workloads"),
        ],
        "scores": {
            "complementarity": U(3),
            "augmentation": U(3),
            "substitutivity": [4, 4, 4, 5, 4, 4, 4, 4, 4],
        },
    },
    {
        "code": "1046",
        "title": "Language Clerical",
        "family": "white_collar",
        "ksas": [
            ("Foreign Language Orthography", "spelling, diacritics, and script conventions of working languages"),
            ("Clerical Procedures", "office routines for multilingual correspondence and files"),
            ("Translation Reference Sources", "dictionaries, glossaries, and terminology databases"),
            ("Bilingual Document Preparation", "producing clean parallel documents in two languages"),
            ("Terminology Lookup", "resolving specialized terms quickly and consistently"),
            ("Typing in Multiple Scripts", "keying accurately across keyboards and character sets"),
            ("Switching Between Languages", "moving between languages without loss of accuracy"),
            ("Preserving Meaning in Routine Translation", "keeping sense and tone intact in standard passages"),
            ("Organizing Multilingual Files", "maintaining retrievable records across languages"),
        ],
        "scores": {
            "complementarity": U(3),
            "augmentation": [3, 2, 3, 3, 2, 3, 3, 2, 3],
            "substitutivity": [4, 4, 3, 4, 4, 3, 4, 4, 3],
        },
    },
    {
        "code": "0326",
        "title": "Office Automation Clerical",
        "family": "white_collar",
        "ksas": [
            ("Office Software Suites", "word processing, spreadsheets, and mail tools used daily"),
            ("Correspondence Standards", "formats and routing rules for official letters and memos"),
            ("Filing Systems", "physical and electronic classification schemes"),
            ("Document Formatting", "producing clean, standard-compliant documents"),
            ("Spreadsheet Upkeep", "maintaining tracking sheets and simple formulas"),
            ("Mail and Calendar Management", "triaging inboxes and keeping schedules current"),
            ("Prioritizing Clerical Workloads", "sequencing tasks across competing requests"),
            ("Following Administrative Procedures", "applying office rules consistently"),
            ("Supporting Multiple Staff", "serving several principals without dropped work"),
        ],
        "scores": {
            "complementarity": U(3),
            "augmentation": [3, 2, 3, 3, 2, 3, 3, 2, 3],
            "substitutivity": U(2),
        },
    },
    {
        "code": "0241",
        "title": "Mediation",
        "family": "white_collar",
        "ksas": [
            ("Dispute Resolution Theory", "models of negotiation, interests, and impasse"),
            ("Labor Relations Law", "statutes and precedent framing workplace disputes"),
            ("Negotiation Frameworks", "structures for staging offers and concessions"),
            ("Facilitating Joint Sessions", "running productive meetings between opposed parties"),
            ("Drafting Settlement Language", "writing durable, unambiguous agreement text"),
            ("Reading Parties and Positions", "sensing movement, resistance, and hidden interests"),
            ("Building Trust Between Parties", "earning credibility with both sides"),
            ("Remaining Neutral Under Pressure", "holding impartiality through heated sessions"),
            ("Steering Talks Toward Agreement", "converting momentum into signed outcomes"),
        ],
        "scores": {
            "complementarity": [4, 4, 3, 4, 4, 3, 4, 4, 3],
            "augmentation": U(3),
            "substitutivity": [1, 1, 2, 1, 1, 2, 1, 1, 2],
        },
    },
    {
        "code": "0667",
        "title": "Orthotist and Prosthetist",
        "family": "white_collar",
        "ksas": [
            ("Human Anatomy and Gait", "musculoskeletal structure and movement patterns"),
            ("Orthotic and Prosthetic Materials", "properties of thermoplastics, composites, and components"),
            ("Clinical Fitting Protocols", "assessment and fitting standards for devices"),
            ("Device Fabrication and Adjustment", "building and tuning orthoses and prostheses"),
            ("Patient Measurement and Casting", "capturing accurate limb geometry"),
            ("Clinical Documentation", "recording care plans and device specifications"),
            ("Manual Dexterity in Fitting", "fine hand work during fit and alignment"),
            ("Assessing Patient Comfort", "judging fit from patient feedback and observation"),
            ("Collaborating with Care Teams", "coordinating with physicians and therapists"),
        ],
        "scores": {
            "complementarity": U(3),
            "augmentation": [3, 3, 2, 3, 3, 2, 3, 3, 2],
            "substitutivity": [2, 2, 1, 2, 2, 1, 2, 2, 1],
        },
    },
    {
        "code": "1350",
        "title": "Geology",
        "family": "white_collar",
        "ksas": [
            ("Stratigraphy and Structural Geology", "rock sequences, deformation, and subsurface architecture"),
            ("Geophysical Survey Methods", "seismic, gravity, and resistivity acquisition and interpretation"),
            ("Mineral and Hydrologic Systems", "ore genesis and groundwater behavior"),
            ("Geologic Mapping", "producing field maps and cross sections"),
            ("Subsurface Data Modeling", "building 3-D models from boreholes and surveys"),
            ("Core Sample Analysis", "logging and testing recovered core"),
            ("Interpreting Field Evidence", "reconciling outcrop observations with models"),
            ("Integrating Multi-Source Data", "merging disparate datasets into one earth picture"),
            ("Communicating Hazard Assessments", "explaining geologic risk to planners"),
        ],
        "scores": {
            "complementarity": U(4),
            "augmentation": [5, 4, 4, 5, 4, 4, 4, 4, 5],
            "substitutivity": [3, 3, 2, 3, 3, 2, 3, 3, 2],
        },
    },
    {
        "code": "1550",
        "title": "Computer Science",
        "family": "white_collar",
        "ksas": [
            ("Algorithms and Data Structures", "complexity, correctness, and choice of representations"),
            ("Software Architecture", "decomposing systems into maintainable components"),
            ("Computational Theory", "models of computation and their practical limits"),
            ("Writing and Reviewing Code", "producing and critiquing production software"),
            ("Debugging Complex Systems", "isolating faults across layered services"),
            ("Performance Analysis", "profiling and removing bottlenecks"),
            ("Decomposing Technical Problems", "splitting vague goals into solvable pieces"),
            ("Learning New Platforms", "absorbing unfamiliar stacks quickly"),
            ("Reasoning About Abstractions", "holding invariants and interfaces in mind"),
        ],
        "scores": {
            "complementarity": [5, 4, 4, 5, 4, 4, 4, 4, 5],
            "augmentation": [4, 4, 5, 4, 4, 5, 4, 4, 5],
            "substitutivity": [3, 4, 3, 3, 4, 3, 3, 4, 3],
        },
    },
    {
        "code": "0840",
        "title": "Nuclear Engineering",
        "family": "white_collar",
        "ksas": [
            ("Reactor Physics", "neutronics, criticality, and core behavior"),
            ("Radiation Safety Standards", "dose limits, shielding, and contamination control"),
            ("Thermal-Hydraulic Systems", "coolant flow and heat removal under all conditions"),
            ("Safety Analysis Modeling", "running accident and transient simulations"),
            ("Engineering Calculation Review", "verifying design and licensing calculations"),
            ("Technical Specification Drafting", "writing operating limits and bases"),
            ("Evaluating Design Margins", "judging conservatism across coupled systems"),
            ("Judging Anomalous Readings", "deciding when plant data signals a real problem"),
            ("Coordinating Multidisciplinary Reviews", "aligning mechanical, electrical, and safety disciplines"),
        ],
        "scores": {
            "complementarity": U(4),
            "augmentation": U(4),
            "substitutivity": [3, 3, 2, 3, 3, 2, 3, 3, 2],
        },
    },
    {
        "code": "2181",
        "title": "Aircraft Operation",
        "family": "white_collar",
        "ksas": [
            ("Flight Rules and Procedures", "airspace, clearances, and operating minima"),
            ("Aircraft Systems", "powerplant, hydraulics, and avionics behavior"),
            ("Meteorology for Aviation", "weather phenomena affecting flight"),
            ("Aircraft Handling", "precise control through all flight regimes"),
            ("Instrument Navigation", "flying accurately without outside reference"),
            ("Radio Communications", "crisp exchanges with control facilities"),
            ("Split-Second Decision Making", "choosing correctly when seconds matter"),
            ("Spatial Orientation", "keeping the aircraft state in mind under workload"),
            ("Managing Cockpit Workload", "sequencing tasks through busy phases"),
        ],
        "scores": {
            "complementarity": [2, 2, 3, 2, 2, 3, 2, 2, 3],
            "augmentation": [2, 2, 1, 2, 2, 1, 2, 2, 1],
            "substitutivity": [1, 1, 2, 1, 1, 2, 1, 1, 2],
        },
    },
    {
        "code": "0704",
        "title": "Animal Health Technician",
        "family": "white_collar",
        "ksas": [
            ("Animal Husbandry", "care, feeding, and housing of livestock and wildlife"),
            ("Veterinary Treatment Protocols", "standard procedures for exams and interventions"),
            ("Zoonotic Disease Signs", "recognizing transmissible disease presentations"),
            ("Animal Restraint and Handling", "controlling animals safely for procedures"),
            ("Sample Collection", "drawing blood and taking specimens in the field"),
            ("Administering Treatments", "delivering vaccines and medications correctly"),
            ("Reading Animal Behavior", "sensing stress, pain, and aggression early"),
            ("Working in Field Conditions", "operating in barns, pens, and open range"),
            ("Physical Stamina in Care Tasks", "sustaining demanding physical work"),
        ],
        "scores": {
            "complementarity": [3, 3, 2, 3, 3, 2, 3, 3, 2],
            "augmentation": U(2),
            "substitutivity": [2, 2, 1, 2, 2, 1, 2, 2, 1],
        },
    },
    {
        "code": "0344",
        "title": "Management and Program Clerical Assistance",
        "family": "white_collar",
        "ksas": [
            ("Program Support Procedures", "administrative routines behind program operations"),
            ("Tracking and Reporting Systems", "status databases and recurring report cycles"),
            ("Office Management Practices", "supplies, records, and workflow upkeep"),
            ("Preparing Program Reports", "assembling accurate recurring submissions"),
            ("Maintaining Tracking Databases", "keeping action items and milestones current"),
            ("Scheduling and Correspondence", "managing calendars and official mail"),
            ("Organizing Competing Requests", "keeping many small tasks moving at once"),
            ("Anticipating Managers' Needs", "staging material before it is asked for"),
            ("Keeping Records Audit-Ready", "maintaining files that pass inspection"),
        ],
        "scores": {
            "complementarity": [5, 5, 4, 5, 5, 4, 5, 5, 4],
            "augmentation": [3, 3, 4, 3, 3, 4, 3, 3, 4],
            "substitutivity": [3, 4, 3, 3, 4, 3, 3, 4, 3],
        },
    },
    {
        "code": "1501",
        "title": "General Mathematics and Statistics",
        "family": "white_collar",
        "ksas": [
            ("Mathematical Analysis", "rigorous treatment of functions, limits, and approximation"),
            ("Probability and Statistical Theory", "distributions, inference, and uncertainty"),
            ("Numerical Methods", "stable computation for applied problems"),
            ("Statistical Computing", "implementing analyses in statistical software"),
            ("Model Specification and Testing", "choosing and validating quantitative models"),
            ("Quantitative Report Preparation", "documenting methods and results"),
            ("Abstract Quantitative Reasoning", "working comfortably with formal structures"),
            ("Validating Analytical Results", "stress-testing conclusions before release"),
            ("Explaining Mathematical Findings", "making formal results usable by others"),
        ],
        "scores": {
            "complementarity": [4, 4, 5, 4, 4, 5, 4, 4, 5],
            "augmentation": [4, 4, 3, 4, 4, 3, 4, 4, 3],
            "substitutivity": U(3),
        },
    },
    {
        "code": "0858",
        "title": "Biomedical Engineering",
        "family": "white_collar",
        "ksas": [
            ("Physiological Systems", "organ system behavior relevant to device design"),
            ("Medical Device Standards", "safety and efficacy requirements for devices"),
            ("Biomaterials", "tissue-compatible materials and their failure modes"),
            ("Device Prototyping and Testing", "building and bench-testing iterations"),
            ("Signal and Image Processing", "extracting clinical meaning from sensor data"),
            ("Regulatory Documentation", "preparing submissions and design history files"),
            ("Translating Clinical Needs into Designs", "turning bedside problems into specifications"),
            ("Cross-Disciplinary Collaboration", "working across clinical and engineering teams"),
            ("Iterative Design Judgment", "deciding what to change between prototypes"),
        ],
        "scores": {
            "complementarity": [4, 5, 4, 4, 5, 4, 4, 5, 4],
            "augmentation": [4, 3, 4, 4, 3, 4, 4, 3, 4],
            "substitutivity": [2, 3, 2, 2, 3, 2, 2, 3, 2],
        },
    },
    {
        "code": "0083",
        "title": "Police",
        "family": "white_collar",
        "ksas": [
            ("Criminal Law and Procedure", "elements of offenses and lawful process"),
            ("Patrol Operations", "beat coverage, response priorities, and scene control"),
            ("Use-of-Force Policy", "graduated response rules and reporting duties"),
            ("De-escalation and Interviewing", "calming encounters and drawing out facts"),
            ("Incident Report Writing", "documenting events completely and defensibly"),
            ("Defensive Tactics", "controlling physical confrontations safely"),
            ("Command Presence", "projecting calm authority in disorder"),
            ("Split-Second Judgment in the Field", "deciding lawfully under pressure"),
            ("Physical Intervention", "acting bodily when no alternative remains"),
        ],
        "scores": {
            "complementarity": U(2),
            "augmentation": [2, 2, 3, 2, 2, 3, 2, 2, 3],
            "substitutivity": [2, 1, 2, 2, 1, 2, 2, 1, 2],
        },
    },
    {
        "code": "1715",
        "title": "Vocational Rehabilitation",
        "family": "white_collar",
        "ksas": [
            ("Disability and Employment Law", "rights and accommodations in the workplace"),
            ("Counseling Methods", "evidence-based approaches to vocational guidance"),
            ("Labor Market Resources", "training pipelines and employer networks"),
            ("Rehabilitation Plan Development", "building individualized return-to-work plans"),
            ("Motivational Interviewing", "strengthening client commitment to goals"),
            ("Case Documentation", "recording services and outcomes accurately"),
            ("Building Client Rapport", "earning trust with people in difficult transitions"),
            ("Adapting Plans to Individual Needs", "reshaping services as circumstances change"),
            ("Advocating with Employers", "negotiating placements and accommodations"),
        ],
        "scores": {
            "complementarity": [2, 3, 2, 2, 3, 2, 2, 3, 2],
            "augmentation": [2, 3, 2, 2, 3, 2, 2, 3, 2],
            "substitutivity": [2, 2, 1, 2, 2, 1, 2, 2, 1],
        },
    },
    {
        "code": "0681",
        "title": "Dental Assistant",
        "family": "white_collar",
        "ksas": [
            ("Dental Procedures and Instruments", "sequence and tooling of common treatments"),
            ("Infection Control Standards", "sterilization and exposure-control protocols"),
            ("Patient Record Requirements", "charting and consent documentation"),
            ("Chairside Assisting", "passing instruments and managing the field"),
            ("Radiograph Preparation", "positioning and exposing diagnostic images"),
            ("Instrument Sterilization", "processing instruments to standard"),
            ("Anticipating Practitioner Needs", "staying one step ahead during procedures"),
            ("Calming Anxious Patients", "settling fearful patients before and during care"),
            ("Fine Motor Control", "precise hand work in a small field"),
        ],
        "scores": {
            "complementarity": [3, 2, 2, 3, 2, 2, 3, 2, 2],
            "augmentation": U(2),
            "substitutivity": [1, 2, 2, 1, 2, 2, 1, 2, 2],
        },
    },
    {
        "code": "7420",
        "title": "Waiter",
        "family": "trade_craft_labor",
        "ksas": [
            ("Menu and Service Standards", "offerings, preparations, and service sequences"),
            ("Food Safety Basics", "safe handling and allergen awareness"),
            ("Point-of-Sale Procedures", "order entry, tendering, and closeout"),
            ("Order Taking and Delivery", "capturing requests exactly and serving promptly"),
            ("Table Service Coordination", "pacing courses across a full station"),
            ("Handling Payments", "settling checks accurately"),
            ("Reading Guest Needs", "noticing what a table wants before being asked"),
            ("Carrying and Serving Under Time Pressure", "moving loaded trays safely at pace"),
            ("Courteous Personal Interaction", "warm, professional presence throughout service"),
        ],
        "scores": {
            "complementarity": U(3),
            "augmentation": U(2),
            "substitutivity": U(1),
        },
    },
    {
        "code": "3603",
        "title": "Masonry",
        "family": "trade_craft_labor",
        "ksas": [
            ("Masonry Materials and Mixes", "brick, block, stone, and mortar behavior"),
            ("Structural Layout Principles", "bonds, courses, and load paths"),
            ("Building Code Requirements", "masonry provisions and inspection points"),
            ("Bricklaying and Blockwork", "laying true, plumb, and level courses"),
            ("Mortar Preparation", "batching and tempering mortar for conditions"),
            ("Surface Finishing", "jointing and cleaning finished work"),
            ("Hand-Eye Precision with Heavy Materials", "placing mass accurately all day"),
            ("Reading Plans on Site", "translating drawings into courses and openings"),
            ("Sustained Physical Work", "maintaining quality through heavy labor"),
        ],
        "scores": {
            "complementarity": U(4),
            "augmentation": U(3),
            "substitutivity": U(2),
        },
    },
    {
        "code": "3605",
        "title": "Plastering",
        "family": "trade_craft_labor",
        "ksas": [
            ("Plaster Systems and Coatings", "base coats, finishes, and compatible substrates"),
            ("Surface Preparation Requirements", "lath, bonding agents, and moisture control"),
            ("Drying and Curing Behavior", "how mixes set under varying conditions"),
            ("Trowel Application", "spreading and working coats to a true plane"),
            ("Patching and Restoration", "matching existing historic surfaces"),
            ("Texture Matching", "reproducing finishes invisibly"),
            ("Steady Hand Control", "holding consistent pressure and angle"),
            ("Judging Surface Readiness", "knowing by eye and touch when to work a coat"),
            ("Working on Scaffolds", "performing finish work safely at height"),
        ],
        "scores": {
            "complementarity": U(4),
            "augmentation": U(3),
            "substitutivity": U(2),
        },
    },
    {
        "code": "3502",
        "title": "Laboring",
        "family": "trade_craft_labor",
        "ksas": [
            ("Work Site Safety Rules", "hazard recognition and protective equipment use"),
            ("Material Handling Basics", "safe lifting, rigging, and staging"),
            ("Tool Care", "upkeep of hand and small power tools"),
            ("Loading and Moving Materials", "shifting stock between storage and work areas"),
            ("Grounds and Site Upkeep", "keeping work areas clear and serviceable"),
            ("Basic Equipment Operation", "running simple powered equipment"),
            ("Heavy Lifting", "moving awkward loads repeatedly"),
            ("Following Crew Directions", "executing instructions reliably"),
            ("Enduring Outdoor Conditions", "working through weather and terrain"),
        ],
        "scores": {
            "complementarity": [2, 2, 1, 2, 2, 1, 2, 2, 1],
            "augmentation": [1, 2, 2, 1, 2, 2, 1, 2, 2],
            "substitutivity": [1, 1, 2, 1, 1, 2, 1, 1, 2],
        },
    },
]

# Justification sentence banks: dimension -> score -> two variants, formatted
# with the competency gloss. Chosen deterministically.
JUSTIFICATIONS = {
    "complementarity": {
        1: ["Generative AI offers essentially no working support for {low}; the competency stands apart from what current models provide.",
            "There is no practical way for generative AI to assist with {low}, so the competency gains nothing from it."],
        2: ["Generative AI gives only marginal help with {low}, limited to background lookups that rarely change the work.",
            "Support from generative AI for {low} stays peripheral; the human performs the competency essentially alone."],
        3: ["Generative AI usefully assists parts of {low}, preparing material the human then verifies and applies.",
            "For {low}, generative AI supplies moderate support such as drafts and summaries while the human supplies the judgment."],
        4: ["Generative AI strongly supports {low}, handling structured groundwork so the human concentrates on decisions.",
            "Working alongside the human, generative AI takes on much of the routine side of {low} and raises overall output."],
        5: ["Generative AI is an exceptional partner for {low}, accelerating nearly every preparatory step while the human directs and interprets.",
            "For {low}, generative AI acts as a constant high-value collaborator, amplifying what a skilled human can deliver."],
    },
    "augmentation": {
        1: ["Integrating generative AI changes almost nothing about how {low} is performed; existing methods carry on unchanged.",
            "No meaningful reshaping of {low} is required to use generative AI, because the tools barely touch the competency."],
        2: ["Generative AI requires only light adjustment to {low}, such as occasionally checking machine-prepared output.",
            "Workers need minor new habits around {low} when generative AI is present, with the core approach intact."],
        3: ["Adopting generative AI moderately reshapes {low}; practitioners must learn to steer and validate model output.",
            "Generative AI pushes a noticeable evolution in {low}, blending traditional technique with oversight of model results."],
        4: ["Generative AI substantially transforms {low}; the competency shifts toward framing problems for models and auditing what returns.",
            "To use generative AI well, practitioners must rework {low} around model-in-the-loop methods."],
        5: ["Generative AI forces a deep transformation of {low}; the competency is redefined around directing and correcting capable models.",
            "With generative AI embedded, {low} becomes a fundamentally different practice centred on orchestrating machine output."],
    },
    "substitutivity": {
        1: ["Generative AI cannot replace any meaningful part of {low}; the work depends on human presence the technology does not have.",
            "No portion of {low} can be handed to generative AI outright; the competency remains entirely human."],
        2: ["Generative AI might absorb only small slivers of {low}, while the substantive work stays with the human.",
            "Replacement potential for {low} is low; models can mimic fragments but not the situated performance."],
        3: ["Generative AI could take over a fair share of routine {low}, though humans must still own the harder cases.",
            "Parts of {low} are automatable by generative AI today, leaving a reduced but real human role."],
        4: ["Generative AI can perform most of {low} unaided, leaving humans mainly to spot-check exceptions.",
            "The bulk of {low} is within reach of full automation by generative AI, with human review shrinking steadily."],
        5: ["Generative AI can already deliver {low} end to end; human involvement is no longer structurally necessary.",
            "Full substitution of {low} is plausible now, since models replicate the entire function reliably."],
    },
}


def ksa_slot_names():
    return [("k", i) for i in (1, 2, 3)] + [("s", i) for i in (1, 2, 3)] + [("a", i) for i in (1, 2, 3)]


def justification(dim, score, gloss, variant):
    bank = JUSTIFICATIONS[dim][score]
    return bank[variant % len(bank)].format(low=gloss)


def write(path: pathlib.Path, content: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(content, encoding="utf-8", newline="\n")


def write_json(path: pathlib.Path, obj) -> None:
    write(path, json.dumps(obj, indent=1, sort_keys=False) + "\n")


def statement(name, gloss):
    return f"{name}: {gloss}"


def make_description(s) -> str:
    title = s["title"]
    ksas = s["ksas"]
    lines = [
        f"Series {s['code']} covers {title} positions across federal facilities and field sites.",
        f"The work requires {ksas[0][0].lower()}, meaning {ksas[0][1]}, together with "
        f"{ksas[1][0].lower()} ({ksas[1][1]}) and {ksas[2][0].lower()} ({ksas[2][1]}).",
        f"Day to day, incumbents exercise {ksas[3][0].lower()} — {ksas[3][1]} — alongside "
        f"{ksas[4][0].lower()} ({ksas[4][1]}) and {ksas[5][0].lower()} ({ksas[5][1]}).",
        f"Successful performance further depends on {ksas[6][0].lower()} ({ksas[6][1]}), "
        f"{ksas[7][0].lower()} ({ksas[7][1]}), and {ksas[8][0].lower()} ({ksas[8][1]}).",
        "Assignments are reviewed for technical adequacy and conformance with governing procedures; "
        "incumbents are expected to keep their methods current and to document their work so that "
        "results can be audited and repeated.",
        "Qualification requires demonstrated experience performing these duties at progressively "
        "greater levels of independence, along with any licensure or certification the position "
        "description specifies.",
    ]
    return "\n\n".join(lines) + "\n"


def make_extract_response(s) -> str:
    obj = {
        "knowledge": [statement(*k) for k in s["ksas"][0:3]],
        "skills": [statement(*k) for k in s["ksas"][3:6]],
        "abilities": [statement(*k) for k in s["ksas"][6:9]],
    }
    return json.dumps(obj, indent=1) + "\n"


def make_impact_response(s, dim) -> str:
    scores = s["scores"][dim]
    obj = {}
    for i, (letter, slot) in enumerate(ksa_slot_names()):
        stem = f"{letter}{slot}"
        score = scores[i]
        gloss = s["ksas"][i][1]
        obj[f"{stem}_{dim}_score"] = str(score)
        obj[f"{stem}_assessment"] = justification(dim, score, gloss, int(s["code"]) + i)
    return json.dumps(obj, indent=1) + "\n"


# --- knowledge-base documents -----------------------------------------------

def kb_occupational_docs():
    docs = {}

    paragraphs = ["---", "title: Federal Occupational Series Overview", "source: internal-handbook", "---", ""]
    paragraphs.append(
        "This overview summarizes the occupational series covered by the assessment corpus. Each "
        "series groups positions that share a common line of work, a common body of required "
        "knowledge, and common skill and ability demands. The paragraphs below sketch the character "
        "of each series in turn.")
    paragraphs.append("")
    for s in SERIES:
        k = s["ksas"][0]
        sk = s["ksas"][3]
        ab = s["ksas"][6]
        paragraphs.append(
            f"Series {s['code']}, {s['title']}: positions in this series center on {k[0].lower()}, "
            f"that is, {k[1]}. The daily craft rests on {sk[0].lower()} ({sk[1]}) and calls for "
            f"{ab[0].lower()}, {ab[1]}. Staffing specialists treat these three demands as the "
            f"signature of the series when classifying new positions.")
        paragraphs.append("")
    docs["series-overview.txt"] = "\n".join(paragraphs)

    docs["ksa-definitions.txt"] = "\n".join([
        "---", "title: Competency Terms Used in Position Classification", "---", "",
        "Position classification in this corpus describes every job through three kinds of "
        "competency. The first kind is an organized body of subject-matter information a person "
        "must hold before adequate performance is possible; classifiers look for the specific "
        "facts, procedures, and frameworks the position applies. The second kind is proficient "
        "manipulation of data or things, observable and measurable through a performance test — "
        "keying rates, tolerance checks, editing accuracy, or instrument handling. The third kind "
        "is the present power to perform an observable activity, demonstrated through behaviors "
        "similar to those the job requires, and distinct from mere aptitude, which is only the "
        "potential to develop such power.", "",
        "When a position is analyzed, classifiers extract the three most consequential entries of "
        "each kind, yielding nine units that together represent the job for comparison and "
        "qualification purposes. Statements are kept close to the source text of the position "
        "description so that later reviewers can trace every unit back to its origin.", ""])

    docs["clerical-occupations.txt"] = "\n".join([
        "---", "title: Clerical and Administrative Support Work", "---", "",
        "Clerical series share a recognizable shape: high-volume, procedure-bound work with "
        "explicit accuracy and timeliness standards. Cash processing units count, verify, and "
        "reconcile currency under dual-control rules. Data transcription units key information "
        "from source documents into systems of record against production counts. Language "
        "clerical units prepare parallel documents across languages using approved terminology. "
        "Office automation units produce correspondence, maintain files, and keep calendars for "
        "supported staff.", "",
        "Because the inputs are structured and the procedures are written down, clerical work is "
        "the usual first candidate whenever an agency pilots process automation. Supervisors "
        "nonetheless retain human checks at custody transfers, signature verification, and any "
        "step with legal effect.", ""])

    docs["technical-occupations.txt"] = "\n".join([
        "---", "title: Professional, Scientific, and Technical Work", "---", "",
        "Professional series in this corpus span economics, mathematics and statistics, computer "
        "science, geology, nuclear engineering, and biomedical engineering. The common thread is "
        "a deep body of theory applied through computational tooling: economists estimate models "
        "over large administrative datasets; geologists fuse survey data into subsurface models; "
        "engineers run safety and design analyses that must survive independent review.", "",
        "These positions pair heavy data work with consequential judgment. The computational "
        "portions — preparing data, drafting analyses, generating candidate designs — absorb new "
        "tooling quickly, while the interpretive portions (what the estimate means, whether the "
        "margin is adequate, which risk is acceptable) remain with the professional of record.", ""])

    docs["trades-occupations.txt"] = "\n".join([
        "---", "title: Trade, Craft, and Labor Work", "---", "",
        "Trade, craft, and labor positions are paid under a separate schedule and are classified "
        "by the work performed with the hands, with tools, and with materials. Masonry and "
        "plastering positions build and restore structures to trueness and finish standards that "
        "are judged by eye and by straightedge. Food service positions run on pace, courtesy, and "
        "physical presence through a service period. Laboring positions move the material that "
        "every other trade depends on.", "",
        "Design aids and planning software can improve layouts and material usage in these "
        "trades, but the defining performance — placing, finishing, carrying, serving — happens "
        "in the physical world and is evaluated there.", ""])

    return docs


def kb_ai_capability_docs():
    docs = {}

    paragraphs = ["---", "title: Generative AI Capability Survey", "topic: capabilities", "---", ""]
    sections = [
        ("Text generation and drafting",
         "Large generative models produce fluent drafts, summaries, correspondence, and "
         "documentation from short instructions. Draft quality is highest where the genre is "
         "conventional and the source material is textual; it degrades where correctness depends "
         "on unstated context or on facts the model cannot check."),
        ("Data preparation and analysis",
         "Models translate natural-language requests into queries, transformations, and analysis "
         "scripts, and they explain anomalies in tabular data. Paired with execution tools they "
         "shorten the path from question to first result, though analysts must confirm that the "
         "generated procedure matches the intended statistical design."),
        ("Code synthesis and review",
         "Generative systems write, refactor, and critique program code across mainstream "
         "languages, propagate interface changes, and draft tests. They accelerate experienced "
         "developers most; unsupervised output still requires review before deployment."),
        ("Structured pattern work",
         "Transcription, classification, extraction, and format conversion over structured or "
         "semi-structured input are the most reliably automatable capabilities, with error rates "
         "competitive with tired human operators over long shifts."),
        ("Simulation and design assistance",
         "In engineering and scientific settings, models generate candidate designs, parameter "
         "sweeps, and surrogate analyses, and they summarize simulation output. They extend the "
         "reach of a modeling team while leaving the acceptance decision to licensed judgment."),
        ("Interactive guidance",
         "Conversational systems walk users through procedures, translate terminology, and adapt "
         "explanations to the reader. They support training and self-service in administrative "
         "domains."),
        ("Known limits: embodiment",
         "No generative model carries, lifts, trowels, restrains an animal, or stands a post. "
         "Work whose value is produced by a body in a place — trades, protective duty, bedside "
         "and chairside care, table service — is outside the technology's reach for the "
         "forecast horizon."),
        ("Known limits: accountable judgment",
         "Where a decision carries legal or safety accountability, current practice keeps a "
         "responsible human in the loop. Models propose; examiners, engineers of record, "
         "mediators, and officers dispose."),
        ("Known limits: situated perception",
         "Reading a room, a patient, a job site, or a herd requires perception and rapport that "
         "text-trained systems do not possess. Tasks anchored in such perception resist both "
         "substitution and deep augmentation."),
    ]
    for heading, body in sections:
        paragraphs.append(heading + ".")
        paragraphs.append(body)
        paragraphs.append("")
    docs["capability-survey.txt"] = "\n".join(paragraphs)

    docs["automation-boundaries.txt"] = "\n".join([
        "---", "title: Boundaries of Workplace Automation", "topic: limits", "---", "",
        "Studies of automation adoption keep finding the same boundary: procedures with written "
        "rules, digital inputs, and checkable outputs automate quickly, while work that depends "
        "on physical dexterity, unscripted interaction, or accountable judgment automates slowly "
        "or not at all. High-volume clerical processing sits on the fast side of the boundary. "
        "Craft trades, protective occupations, and hands-on care sit on the slow side.", "",
        "A second boundary concerns verification. Even where a model can produce the work "
        "product, institutions require a human who can be held answerable for it. The cost of "
        "that verification, not the cost of generation, increasingly sets the pace of adoption.", ""])

    docs["collaboration-modes.txt"] = "\n".join([
        "---", "title: Patterns of Human-AI Collaboration", "topic: collaboration", "---", "",
        "Field reports distinguish two healthy collaboration patterns. In the assistant pattern, "
        "the model handles preparation — gathering, drafting, formatting, first-pass analysis — "
        "and the professional spends recovered time on interpretation and decisions; the human "
        "skill set stays recognizably the same. In the transformation pattern, the work itself "
        "is re-architected around the model: practitioners learn to specify problems precisely, "
        "steer generation, and audit output, and the skill profile of the occupation shifts "
        "accordingly.", "",
        "Occupations differ in which pattern fits. Analytical professions tend to move through "
        "the assistant pattern into transformation as tooling matures. Interpersonal and "
        "physical occupations often stop at light assistance because the core performance "
        "cannot be delegated.", ""])

    docs["adoption-risk.txt"] = "\n".join([
        "---", "title: Oversight Considerations for Generative Tools", "topic: governance", "---", "",
        "Agencies piloting generative tools report three recurring controls: provenance logging "
        "of every machine-produced artifact, mandatory human sign-off at decision points, and "
        "periodic audits comparing machine output against expert baselines. The controls cost "
        "least in domains with existing review culture — engineering, statistics, finance — and "
        "most in field occupations where work is oral and immediate.", "",
        "Risk assessments emphasize that substitution claims should be tested against the whole "
        "job, not the most automatable task within it. A role is rarely its paperwork.", ""])

    return docs


# --- verification ------------------------------------------------------------

def verify():
    cat_slices = {"Knowledge": slice(0, 3), "Skills": slice(3, 6), "Abilities": slice(6, 9)}

    def cat_avg(s, dim, cat):
        v = s["scores"][dim][cat_slices[cat]]
        return sum(v) / 3.0

    def dim_avg(s, dim):
        return sum(s["scores"][dim]) / 9.0

    failures = []

    # Dimension ordering per KSA category over all series.
    for cat in cat_slices:
        means = {d: sum(cat_avg(s, d, cat) for s in SERIES) / len(SERIES) for d in DIMENSIONS}
        print(f"[verify] {cat:9s} means: " + "  ".join(f"{d[:4]}={means[d]:.4f}" for d in DIMENSIONS))
        if not (means["complementarity"] > means["augmentation"] > means["substitutivity"]):
            failures.append(f"category {cat}: ordering violated {means}")

    # Family complementarity ordering.
    wc = [s for s in SERIES if s["family"] == "white_collar"]
    tcl = [s for s in SERIES if s["family"] == "trade_craft_labor"]
    wc_c = sum(dim_avg(s, "complementarity") for s in wc) / len(wc)
    tcl_c = sum(dim_avg(s, "complementarity") for s in tcl) / len(tcl)
    print(f"[verify] complementarity means: white_collar={wc_c:.4f} trade_craft_labor={tcl_c:.4f}")
    if not wc_c > tcl_c:
        failures.append(f"family ordering violated: WC {wc_c} vs TCL {tcl_c}")

    # Ranking pins.
    sub_sorted = sorted(SERIES, key=lambda s: (-dim_avg(s, "substitutivity"), s["code"]))
    top3 = [s["code"] for s in sub_sorted[:3]]
    print(f"[verify] substitutivity top 3: {top3}, bottom: {sub_sorted[-1]['code']}")
    if "0530" not in top3 or "0356" not in top3:
        failures.append(f"clerical series not in substitutivity top block: {top3}")
    if sub_sorted[-1]["code"] != "7420":
        failures.append(f"7420 is not the substitutivity bottom rank: {sub_sorted[-1]['code']}")
    if abs(dim_avg(next(s for s in SERIES if s["code"] == "7420"), "substitutivity") - 1.0) > 1e-12:
        failures.append("7420 substitutivity average is not 1.0")

    # Per-series pins.
    s0110 = next(s for s in SERIES if s["code"] == "0110")
    pins = [
        (s0110["scores"]["complementarity"][3], 5, "0110 data analysis complementarity"),
        (s0110["scores"]["substitutivity"][3], 4, "0110 data analysis substitutivity"),
        (s0110["scores"]["complementarity"][0], 4, "0110 economic principles complementarity"),
        (s0110["scores"]["substitutivity"][0], 2, "0110 economic principles substitutivity"),
        (s0110["scores"]["complementarity"][1], 3, "0110 economic institutions complementarity"),
        (s0110["scores"]["augmentation"][1], 2, "0110 economic institutions augmentation"),
    ]
    for got, want, what in pins:
        if got != want:
            failures.append(f"{what}: {got} != {want}")
    s0084 = next(s for s in SERIES if s["code"] == "0084")
    if [dim_avg(s0084, d) for d in DIMENSIONS] != [2.0, 2.0, 1.0]:
        failures.append("0084 dimension averages are not (2, 2, 1)")
    s0485 = next(s for s in SERIES if s["code"] == "0485")
    if [dim_avg(s0485, d) for d in DIMENSIONS] != [4.0, 4.0, 2.0]:
        failures.append("0485 dimension averages are not (4, 4, 2)")

    if failures:
        for f in failures:
            print("FAIL:", f, file=sys.stderr)
        sys.exit(1)
    print(f"[verify] all checks passed over {len(SERIES)} series")


def main():
    for s in SERIES:
        if len(s["ksas"]) != 9:
            raise SystemExit(f"{s['code']}: needs 9 competencies")
        for dim in DIMENSIONS:
            if len(s["scores"][dim]) != 9 or not all(1 <= x <= 5 for x in s["scores"][dim]):
                raise SystemExit(f"{s['code']}: bad score vector for {dim}")

    for s in SERIES:
        write(ROOT / "descriptions" / f"{s['code']}.txt", make_description(s))
        write(ROOT / "responses" / f"{s['code']}_ksa_extract.json", make_extract_response(s))
        for dim in DIMENSIONS:
            write(ROOT / "responses" / f"{s['code']}_{dim}.json", make_impact_response(s, dim))

    roster = ["series_code,series_title,description_path"]
    for s in SERIES:
        roster.append(f"{s['code']},{s['title']},descriptions/{s['code']}.txt")
    write(ROOT / "roster.csv", "\n".join(roster) + "\n")

    families = ["series_code,family"]
    for s in SERIES:
        families.append(f"{s['code']},{s['family']}")
    write(ROOT / "families.csv", "\n".join(families) + "\n")

    for name, content in kb_occupational_docs().items():
        write(ROOT / "kb_occupational" / name, content if content.endswith("\n") else content + "\n")
    for name, content in kb_ai_capability_docs().items():
        write(ROOT / "kb_ai_capability" / name, content if content.endswith("\n") else content + "\n")

    config = {
        "kb_occupational_dir": "kb_occupational",
        "kb_ai_capability_dir": "kb_ai_capability",
        "series_roster": "roster.csv",
        "family_map": "families.csv",
        "prompt_dir": "prompts",
        "fixture_dir": "responses",
        "output_dir": "out",
        "backend": "scripted",
        "index_mode": "exact",
        "embedding": {"provider": "hashed", "dim": 256, "seed": 1234},
        "concurrency": 4,
    }
    write_json(ROOT / "config.json", config)

    n_files = 2 + 1 + len(SERIES) * 5  # roster+families, config, per-series files
    print(f"[gen] wrote fixtures for {len(SERIES)} series (~{n_files} files) under {ROOT}")
    verify()


if __name__ == "__main__":
    main()
