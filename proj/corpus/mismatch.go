package main

import "fmt"

// Work has no channel parameters and is checked on its own.
func Work() {
	for {
		fmt.Println("working")
	}
}

func send(out chan int, sent chan int) {
	out <- 1
	sent <- 1
}

func recv(in chan int, received chan int) {
	<-in
	<-in
	received <- 1
}

func main() {
	ch := make(chan int)
	done := make(chan int)
	go send(ch, done)
	go recv(ch, done)
	<-done
	<-done
}
