//! Code listings from the write-up of the original system, transcribed as
//! plain text. The `same_person` listing keeps its `severity(G)` slip; the
//! rule pack uses one shared variable instead.

#![allow(dead_code)]

pub const UTTERS: &str = "/* EVIDENCE 3 */
utters(
    date(2020,05,12,15,01),
    date(2020,05,12,15,30),
    criminalInRedJacket,
    'jamunindi jamunindi',
    witness(fantine)).";

pub const WORDS_ORIGIN: &str = "words_origin_evaluation(
    date(2020,05,14,10,00),
    eponine,
    'jamunindi jamunindi',
    'reggio calabria',
    100).";

pub const DRIVES: &str = "/* EVIDENCE 4 */
drives(
    date(2020,05,12,15,03),
    date(2020,05,12,15,04),
    valjean,
    vehicle(scooter,12345),
    witness(thenardier)).";

pub const BORN: &str = "born(
     date(1980,10,17,13,07),
     valjean,
     'reggio calabria'). ";

pub const COMMITS: &str = "commits(
     date(2020,05,12,14,45),
     criminalInRedJacket,
     armedRobbery,
     witness(enjolras)).";

pub const RELIABLE: &str = "reliable(enjolras, hi).
reliable(fantine, hi).
reliable(thenardier, hi). ";

pub const SAME_PERSON: &str = "same_person(X, Y, Evidences) :-
  setof((Ev, severity(S), precision(P)),
        evidence_same_as(Ev, X, Y, severity(G), precision(P)),
        Evidences),
  length(Evidences, L),  L > 1, member((_, severity(hi), precision(hi)), Evidences).";

pub const RESPONSIBLE: &str = "responsibile(X) :-
   committed(Y, Date, Crime, Place, EvidCrimeCommitted),
   same_person(X, Y, EvidSamePerson),
   pretty_print(Date, X, Y, Crime, Place, EvidCrimeCommitted, EvidSamePerson).";

pub const ALL: [(&str, &str); 8] = [
    ("utters", UTTERS),
    ("words_origin_evaluation", WORDS_ORIGIN),
    ("drives", DRIVES),
    ("born", BORN),
    ("commits", COMMITS),
    ("reliable", RELIABLE),
    ("same_person", SAME_PERSON),
    ("responsible", RESPONSIBLE),
];
