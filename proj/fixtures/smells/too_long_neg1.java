public void dumpSummary() {
    emit("row 0");
    emit("row 1");
    emit("row 2");
    emit("row 3");
    emit("row 4");
    emit("row 5");
    emit("row 6");
    emit("row 7");
    emit("row 8");
    emit("row 9");
    emit("row 10");
    emit("row 11");
    emit("row 12");
    emit("row 13");
    emit("row 14");
    emit("row 15");
    emit("row 16");
    emit("row 17");
    emit("row 18");
    emit("row 19");
    emit("row 20");
    emit("row 21");
    emit("row 22");
    emit("row 23");
    emit("row 24");
    emit("row 25");
    emit("row 26");
    emit("row 27");
    emit("row 28");
    emit("row 29");
    emit("row 30");
    emit("row 31");
    emit("row 32");
    emit("row 33");
    emit("row 34");
    emit("row 35");
    emit("row 36");
    emit("row 37");
    emit("row 38");
    emit("row 39");
}
