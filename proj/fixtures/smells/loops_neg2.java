public void sweepTwice(java.util.List<String> items) {
    for (String a : items) { prepare(a); }
    for (String b : items) { validate(b); }
    for (String c : items) { transform(c); }
    for (String d : items) { persist(d); }
}
